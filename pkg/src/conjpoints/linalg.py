"""Exact rational linear algebra on plain nested lists.

Matrices are lists of rows. Entries may be ``int`` or ``Fraction``; results are
exact. Dimensions here are small (at most a few dozen), so Gaussian elimination
over ``Fraction`` is adequate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

Matrix = List[List[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def shape(a: Sequence[Sequence]) -> tuple:
    return (len(a), len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def _clear_denominators(a: Sequence[Sequence]):
    """Integer rows and the product of the row scale factors."""
    rows, scale = [], 1
    for row in a:
        den = 1
        for x in row:
            d = x.denominator
            den = den * d // math.gcd(den, d)
        rows.append([int(x * den) for x in row])
        scale *= den
    return rows, scale


def det(a: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for int/Fraction)."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, (int, Fraction)) for row in a for x in row) and \
            any(isinstance(x, Fraction) for row in a for x in row):
        rows, scale = _clear_denominators(a)
        return Fraction(_bareiss(rows), scale)
    return _bareiss([list(row) for row in a])


def _bareiss(m: List[list]):
    """In-place Bareiss elimination on a square matrix of ints or Fractions."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = v // prev if isinstance(v, int) and isinstance(prev, int) else v / prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_cofactor(a: Sequence[Sequence]):
    """Laplace expansion along the first row; an independent check for ``det``."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        if a[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        total += (-1) ** j * a[0][j] * det_cofactor(minor)
    return total


def row_echelon(a: Sequence[Sequence]) -> tuple:
    """Return ``(reduced_rows, pivot_columns)`` of the reduced row echelon form."""
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(row_echelon(a)[1])


def nullspace(a: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of ``{x : a x = 0}``."""
    rows, cols = shape(a)
    red, pivots = row_echelon(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Solve the square nonsingular system ``a x = b``."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def submatrix(a: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int]) -> list:
    return [[a[i][j] for j in cols] for i in rows]


def minor(a: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int]):
    return det(submatrix(a, rows, cols))


def index_sets(n: int, tau: int) -> List[tuple]:
    """Increasing ``tau``-tuples from ``0..n-1`` in lexicographic order."""
    return list(combinations(range(n), tau))


class IncrementalRank:
    """Tracks the span of vectors added so far; ``add`` reports independence."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: List[List[Fraction]] = []
        self._pivots: List[int] = []

    def reduce(self, v: Sequence) -> List[Fraction]:
        w = [Fraction(x) for x in v]
        for row, p in zip(self._rows, self._pivots):
            if w[p]:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def is_independent(self, v: Sequence) -> bool:
        return any(self.reduce(v))

    def add(self, v: Sequence) -> bool:
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for k, row in enumerate(self._rows):
            if row[p]:
                f = row[p]
                self._rows[k] = [x - f * y for x, y in zip(row, w)]
        self._rows.append(w)
        self._pivots.append(p)
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)


def solve_mod_p(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> Optional[List[int]]:
    """Solve ``a x = b (mod p)`` for square ``a``; ``None`` if singular mod p.

    Solutions are returned with representatives in ``{0, ..., p-1}``.
    """
    n = len(a)
    m = [[x % p for x in row] + [b[i] % p] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = pow(m[c][c], -1, p)
        m[c] = [(x * inv) % p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]
