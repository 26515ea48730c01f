"""Deliberately naive reference implementations used to cross-check the fast paths."""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .linalg import inverse


def _dec(x: Fraction) -> Decimal:
    x = Fraction(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def count_quadratic_oracle(chart_coeffs: Sequence[Fraction], Q: int, gamma, c,
                           J: Tuple, digits: int = 60) -> int:
    """Double loop over ``(a2, a1, a0)`` with roots in high-precision decimals.

    Counts ordered root pairs ``(r, s)`` of irreducible primitive quadratics with
    ``lo < r < hi`` and ``|f(r) - s| < c Q^-gamma``; ``f`` has the given
    coefficients, lowest degree first.
    """
    lo, hi = J
    count = 0
    with localcontext() as ctx:
        ctx.prec = digits
        gamma = Fraction(gamma)
        t = _dec(Fraction(c)) * (Decimal(Q) ** (-_dec(gamma)))
        tie = Decimal(10) ** (-(digits * 2 // 3))
        lo_d, hi_d = _dec(lo), _dec(hi)
        cs = [_dec(x) for x in chart_coeffs]
        for a2 in range(1, Q + 1):
            for a1 in range(-Q, Q + 1):
                for a0 in range(-Q, Q + 1):
                    if math.gcd(math.gcd(a2, a1), a0) != 1:
                        continue
                    D = a1 * a1 - 4 * a2 * a0
                    if D <= 0 or math.isqrt(D) ** 2 == D:
                        continue
                    sq = Decimal(D).sqrt()
                    r1 = (-a1 + sq) / (2 * a2)
                    r2 = (-a1 - sq) / (2 * a2)
                    for r, s in ((r1, r2), (r2, r1)):
                        if not lo_d < r < hi_d:
                            continue
                        fr = sum(cf * r ** k for k, cf in enumerate(cs))
                        # a gap this small can only be an exact tie, which fails "<"
                        if abs(fr - s) < t - tie:
                            count += 1
    return count


def svp_bruteforce(basis: Sequence[Sequence], max_box: int = 500_000) -> Optional[Tuple[Tuple[int, ...], Fraction]]:
    """Shortest nonzero vector in the sup norm by scanning the full coefficient box.

    The box comes from ``|z| <= |B^-1| R`` with ``R`` the shortest basis column.
    Returns ``None`` when the box is larger than ``max_box`` points.
    """
    B = [[Fraction(x) for x in row] for row in basis]
    k = len(B)
    R = min(max(abs(B[i][j]) for i in range(k)) for j in range(k))
    inv = inverse(B)
    bounds = [math.floor(sum(abs(x) for x in row) * R) for row in inv]
    if math.prod(2 * b + 1 for b in bounds) > max_box:
        return None
    best = None
    for z in product(*(range(-b, b + 1) for b in bounds)):
        if not any(z):
            continue
        lead = next(c for c in z if c)
        if lead < 0:
            continue
        v = [sum(B[i][j] * z[j] for j in range(k)) for i in range(k)]
        key = (max(abs(x) for x in v), z)
        if best is None or key < best:
            best = key
    return (best[1], best[0])


def successive_minima_bruteforce(basis: Sequence[Sequence], half_widths: Sequence,
                                 max_box: int = 2_000_000) -> Optional[List[Fraction]]:
    """Successive minima of a box body from plain scans of growing coefficient cubes.

    A scan of ``|z|_inf <= b`` that yields ``k`` independent vectors with largest
    gauge ``g`` is complete once ``|B^-1| diag(h) g <= b`` holds coordinatewise,
    since every ``z`` of gauge ``<= g`` then lies in the cube. Returns ``None``
    if the cube needed exceeds ``max_box`` points.
    """
    B = [[Fraction(x) for x in row] for row in basis]
    h = [Fraction(x) for x in half_widths]
    k = len(B)
    inv = inverse(B)
    reach = [sum(abs(x) * w for x, w in zip(row, h)) for row in inv]
    b = 1
    while (2 * b + 1) ** k <= max_box:
        cands = []
        for z in product(range(-b, b + 1), repeat=k):
            if any(z):
                v = [sum(B[i][j] * z[j] for j in range(k)) for i in range(k)]
                cands.append((max(abs(a) / w for a, w in zip(v, h)), z))
        cands.sort()
        minima: List[Fraction] = []
        chosen: List[Tuple[int, ...]] = []
        for g, z in cands:
            if _rank(chosen + [z]) > len(chosen):
                chosen.append(z)
                minima.append(g)
                if len(minima) == k:
                    break
        if len(minima) == k and all(r * minima[-1] <= b for r in reach):
            return minima
        b *= 2
    return None


def _rank(rows: List[Tuple[int, ...]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank
