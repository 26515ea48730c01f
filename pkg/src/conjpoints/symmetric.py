"""Partitions and symmetric polynomials: alternants, Schur, monomial and
elementary symmetric polynomials, the Schur map and Schur-basis expansion.

Variables are named ``T0 .. T{tau-1}``. Schur polynomials are obtained by exact
division of alternants, so every call doubles as a divisibility self-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, List, Sequence, Tuple

from .linalg import solve
from .polynomial import SparsePolynomial

WEIGHT = "weight"
BOX = "box"
MODES = (WEIGHT, BOX)


@dataclass(frozen=True, order=False)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if text in ("", "()", "0", "empty"):
            return cls(())
        try:
            parts = tuple(int(t) for t in text.strip("()").split(",") if t.strip())
        except ValueError as exc:
            raise ValueError(f"malformed partition {text!r}") from exc
        return cls(parts)

    def weight(self) -> int:
        return sum(self.parts)

    def length(self) -> int:
        return len(self.parts)

    def padded(self, tau: int) -> Tuple[int, ...]:
        if self.length() > tau:
            raise ValueError(f"partition {self.parts} has more than {tau} parts")
        return self.parts + (0,) * (tau - self.length())

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "()"


def _partitions_of(w: int, max_part: int, max_len: int):
    """Partitions of ``w`` with parts <= max_part and at most max_len parts, lex descending."""
    if w == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(w, max_part), 0, -1):
        for rest in _partitions_of(w - first, first, max_len - 1):
            yield (first,) + rest


def enumerate_partitions(bound: int, length_bound: int, mode: str = WEIGHT) -> List[Partition]:
    """All partitions within the given bounds, graded by weight then lex descending.

    In ``weight`` mode ``bound`` caps ``|lambda|``; in ``box`` mode it caps the
    largest part, so the result is the set of Young diagrams in a
    ``length_bound x bound`` box.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if length_bound < 1:
        raise ValueError("length bound must be at least 1")
    if mode == WEIGHT:
        max_weight, max_part = bound, bound
    elif mode == BOX:
        max_weight, max_part = bound * length_bound, bound
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for w in range(max_weight + 1):
        out.extend(Partition(p) for p in _partitions_of(w, max_part, length_bound))
    return out


@dataclass(frozen=True)
class SchurIndexSet:
    n: int
    tau: int
    mode: str
    partitions: Tuple[Partition, ...]

    @classmethod
    def build(cls, n: int, tau: int, mode: str) -> "SchurIndexSet":
        if not 1 <= tau <= n + 1:
            raise ValueError(f"need 1 <= tau <= n+1, got n={n}, tau={tau}")
        return _index_set(n, tau, mode)

    def __len__(self):
        return len(self.partitions)


@lru_cache(maxsize=None)
def _index_set(n: int, tau: int, mode: str) -> SchurIndexSet:
    return SchurIndexSet(n, tau, mode, tuple(enumerate_partitions(n + 1 - tau, tau, mode)))


def _check_length(lam: Partition, tau: int) -> None:
    if tau < 1:
        raise ValueError("tau must be positive")
    if lam.length() > tau:
        raise ValueError(f"partition {lam} has more than tau={tau} parts")


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(tuple(lam))


def _det_exponent_matrix(exps: Sequence[int], tau: int) -> SparsePolynomial:
    # det(T_i ** exps[j]) via the Leibniz expansion; exps are distinct so no terms cancel
    terms: Dict[tuple, int] = {}
    for perm in permutations(range(tau)):
        sign = 1
        for i in range(tau):
            for j in range(i + 1, tau):
                if perm[i] > perm[j]:
                    sign = -sign
        exp = [0] * tau
        for i in range(tau):
            exp[i] = exps[perm[i]]
        terms[tuple(exp)] = terms.get(tuple(exp), 0) + sign
    return SparsePolynomial(tau, terms)


@lru_cache(maxsize=None)
def _alternant(parts: Tuple[int, ...], tau: int) -> SparsePolynomial:
    padded = parts + (0,) * (tau - len(parts))
    exps = [padded[j] + (tau - 1 - j) for j in range(tau)]
    return _det_exponent_matrix(exps, tau)


def alternant(lam, tau: int) -> SparsePolynomial:
    """``det(T_i ** (lambda_j + tau - 1 - j))``; the empty partition gives ``prod_{i<j}(T_i - T_j)``."""
    lam = _as_partition(lam)
    _check_length(lam, tau)
    return _alternant(lam.parts, tau)


@lru_cache(maxsize=None)
def _schur(parts: Tuple[int, ...], tau: int) -> SparsePolynomial:
    if tau == 1:
        return SparsePolynomial.monomial((sum(parts),))
    num = _alternant(parts, tau)
    den = _alternant((), tau)
    q, r = num.divmod(den)
    if r:
        raise ArithmeticError(f"alternant for {parts} not divisible by the Vandermonde")
    return q


def schur(lam, tau: int) -> SparsePolynomial:
    """Schur polynomial ``s_lambda(T0..T{tau-1})``; zero when ``lambda`` has more than tau parts."""
    lam = _as_partition(lam)
    if tau < 1:
        raise ValueError("tau must be positive")
    if lam.length() > tau:
        return SparsePolynomial.zero(tau)
    return _schur(lam.parts, tau)


def monomial_symmetric(lam, tau: int) -> SparsePolynomial:
    lam = _as_partition(lam)
    _check_length(lam, tau)
    return SparsePolynomial(tau, {perm: 1 for perm in set(permutations(lam.padded(tau)))})


def elementary_symmetric(k: int, tau: int) -> SparsePolynomial:
    if not 0 <= k <= tau:
        raise ValueError(f"need 0 <= k <= tau, got k={k}, tau={tau}")
    terms = {}
    for idx in combinations(range(tau), k):
        exp = [0] * tau
        for i in idx:
            exp[i] = 1
        terms[tuple(exp)] = 1
    return SparsePolynomial(tau, terms)


def schur_map_eval(n: int, tau: int, point: Sequence, mode: str = WEIGHT) -> List:
    """Evaluate every Schur polynomial of the index set at ``point``, in index-set order."""
    if len(point) != tau:
        raise ValueError(f"point has {len(point)} entries, expected tau={tau}")
    index = SchurIndexSet.build(n, tau, mode)
    return [schur(lam, tau).evaluate(point) for lam in index.partitions]


def expand_in_schur_basis(p: SparsePolynomial, k: int, tau: int) -> Dict[Partition, Fraction]:
    """Coefficients ``c`` with ``p == sum(c[lam] * schur(lam, tau))`` over ``|lam| <= k``."""
    if p.arity != tau:
        raise ValueError(f"polynomial has arity {p.arity}, expected {tau}")
    if not p.is_symmetric():
        raise ValueError("polynomial is not symmetric")
    if p.total_degree() > k:
        raise ValueError(f"degree {p.total_degree()} exceeds {k}")
    if not p:
        return {}
    basis = enumerate_partitions(k, tau, WEIGHT)
    # In the monomial basis the transition matrix is triangular (Kostka numbers),
    # but solving the square system keeps this independent of that fact.
    mat = [[schur(mu, tau).coefficient(lam.padded(tau)) for mu in basis] for lam in basis]
    rhs = [p.coefficient(lam.padded(tau)) for lam in basis]
    coeffs = solve(mat, rhs)
    out = {lam: c for lam, c in zip(basis, coeffs) if c}
    recon = sum((schur(lam, tau) * c for lam, c in out.items()), SparsePolynomial.zero(tau))
    if recon != p:
        raise ArithmeticError("Schur expansion failed to reconstruct its input")
    return out


def partition_from_columns(cols: Sequence[int]) -> Partition:
    """Partition matched to an increasing column set ``J``: ``lambda_i = j_{tau-i} - (tau-1-i)``."""
    tau = len(cols)
    parts = [cols[tau - 1 - i] - (tau - 1 - i) for i in range(tau)]
    return Partition(tuple(p for p in parts if p > 0))
