"""Enumeration of algebraic conjugate points of bounded height and counts of
those lying close to a manifold.

A point is an ordered tuple of distinct real roots of one primitive,
irreducible integer polynomial with positive leading coefficient. Coordinates
are Sturm-certified root enclosures, and closeness is decided with interval
arithmetic on refined enclosures.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import permutations, product
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .lattice import iroot, rational_power
from .polynomial import SparsePolynomial
from .univariate import (IntegerPolynomial, RootEnclosure, is_irreducible, sturm_isolate)

MAX_DEGREE = 5
REFINE_LIMIT = Fraction(1, 2 ** 80)
FAST_GUARD = 1e-7


@dataclass(frozen=True)
class AlgebraicPoint:
    minimal_polynomial: IntegerPolynomial
    coordinates: Tuple[RootEnclosure, ...]
    root_indices: Tuple[int, ...]

    @property
    def height(self) -> int:
        return self.minimal_polynomial.height()

    @property
    def degree(self) -> int:
        return self.minimal_polynomial.degree

    @property
    def ident(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.minimal_polynomial.coeffs, self.root_indices)


@dataclass
class CountResult:
    Q: int
    gamma: Fraction
    c: Fraction
    count: int
    undecidable: int = 0
    samples: List[Tuple] = field(default_factory=list)
    wall_ms: float = 0.0


# -- polynomial stream -------------------------------------------------------

def candidate_polynomials(n: int, Q: int, min_degree: int = 1,
                          leading: Optional[Sequence[int]] = None) -> Iterator[IntegerPolynomial]:
    """Primitive integer polynomials with positive leading coefficient,
    ``min_degree <= deg <= n`` and height ``<= Q``."""
    if n < 1 or Q < 1:
        raise ValueError("need n >= 1 and Q >= 1")
    if n > MAX_DEGREE:
        raise ValueError(f"degree cap is {MAX_DEGREE}")
    rng = range(-Q, Q + 1)
    for deg in range(max(1, min_degree), n + 1):
        for lead in (leading if leading is not None else range(1, Q + 1)):
            for low in product(rng, repeat=deg):
                coeffs = tuple(reversed(low)) + (lead,)
                if reduce(math.gcd, coeffs, 0) != 1:
                    continue
                yield IntegerPolynomial(coeffs)


def enumerate_algebraic_points(n: int, m: int, Q: int) -> Iterator[AlgebraicPoint]:
    """Every ordered ``(m+1)``-tuple of distinct real roots of each minimal polynomial
    of degree ``<= n`` and height ``<= Q``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    for P in candidate_polynomials(n, Q, min_degree=m + 1):
        if not is_irreducible(P):
            continue
        roots = sturm_isolate(P)
        if len(roots) < m + 1:
            continue
        for idx in permutations(range(len(roots)), m + 1):
            yield AlgebraicPoint(P, tuple(roots[i] for i in idx), idx)


# -- interval arithmetic -----------------------------------------------------

Interval = Tuple[Fraction, Fraction]


def _ipow(a: Interval, e: int) -> Interval:
    lo, hi = a
    if e == 0:
        return (Fraction(1), Fraction(1))
    vals = (lo ** e, hi ** e)
    if e % 2 == 0 and lo < 0 < hi:
        return (Fraction(0), max(vals))
    return (min(vals), max(vals))


def _imul(a: Interval, b: Interval) -> Interval:
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def eval_interval(p: SparsePolynomial, box: Sequence[Interval]) -> Interval:
    lo = hi = Fraction(0)
    for exp, c in p.items():
        term = (c, c)
        for iv, e in zip(box, exp):
            if e:
                term = _imul(term, _ipow(iv, e))
        lo += term[0]
        hi += term[1]
    return (lo, hi)


def threshold_bounds(c, Q, gamma, bits: int = 100) -> Interval:
    """Rational bounds for ``c * Q^(-gamma)``; equal when the value is rational."""
    c, gamma = Fraction(c), Fraction(gamma)
    v = rational_power(Fraction(Q), -gamma)
    if v is not None:
        return (c * v, c * v)
    # t^q = c^q * Q^(-p)
    p, q = gamma.numerator, gamma.denominator
    r = c ** q / Fraction(Q) ** p
    scale = 2 ** bits
    base = iroot(math.floor(r * scale ** q), q)
    return (Fraction(base, scale), Fraction(base + 1, scale))


# -- decisions ---------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    """``alpha_j ~ f_j(alpha_0..alpha_{d-1})`` for ``j = d..m``."""

    d: int
    components: Tuple[SparsePolynomial, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if self.d < 1 or any(c.arity != self.d for c in comps):
            raise ValueError("chart components must be polynomials in d variables")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return self.d - 1 + len(self.components)


TRUE, FALSE, UNDECIDED = 1, 0, -1


def decide_point(coords: List[RootEnclosure], chart: Chart, J: Sequence[Interval],
                 t: Interval, limit: Fraction = REFINE_LIMIT) -> int:
    """Interval decision for ``alpha_hat in J`` and ``|f_j(alpha_hat) - alpha_j| < t``."""
    d = chart.d
    width = max((r.width for r in coords), default=Fraction(0))
    width = max(width, limit)
    while True:
        iv = [(r.lo, r.hi) for r in coords]
        decided = True
        for (a, b), (lo, hi) in zip(iv[:d], J):
            if b <= lo or a >= hi:
                return FALSE
            if not (lo < a and b < hi):
                decided = False
        for j, comp in enumerate(chart.components, start=d):
            flo, fhi = eval_interval(comp, iv[:d])
            dlo, dhi = flo - iv[j][1], fhi - iv[j][0]
            amin = Fraction(0) if dlo <= 0 <= dhi else min(abs(dlo), abs(dhi))
            amax = max(abs(dlo), abs(dhi))
            if amin >= t[1]:
                return FALSE
            if not amax < t[0]:
                decided = False
        if decided:
            return TRUE
        if width <= limit:
            return UNDECIDED
        width /= 2 ** 8
        if width < limit:
            width = limit
        coords[:] = [r.refine(width) for r in coords]


def _normalize_box(J: Sequence[Tuple], d: int) -> Optional[List[Interval]]:
    box = [(Fraction(a), Fraction(b)) for a, b in J]
    if len(box) != d:
        raise ValueError(f"box must have {d} intervals")
    if any(a >= b for a, b in box):
        return None
    return box


def count_near_manifold(chart: Chart, n: int, Q: int, gamma, c, J: Sequence[Tuple],
                        keep_samples: bool = False, method: str = "auto",
                        jobs: int = 1) -> CountResult:
    """Count ``M^n_{m,f}(Q, gamma, J)``.

    ``method`` is ``exact`` (Sturm isolation of every polynomial), ``fast``
    (vectorized quadratic path with exact confirmation near every boundary) or
    ``auto`` (fast when ``n == 2``, ``m == 1``, ``d == 1``).
    """
    start = time.perf_counter()
    gamma, c = Fraction(gamma), Fraction(c)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if c < 0:
        raise ValueError("c must be nonnegative")
    m = chart.m
    if not n > m:
        raise ValueError("need n > m")
    res = CountResult(Q, gamma, c, 0)
    box = _normalize_box(J, chart.d)
    if c == 0 or box is None:
        res.wall_ms = (time.perf_counter() - start) * 1e3
        return res
    t = threshold_bounds(c, Q, gamma)
    quad = n == 2 and m == 1 and chart.d == 1
    if method == "auto":
        method = "fast" if quad else "exact"
    if method == "fast":
        if not quad:
            raise ValueError("the fast path handles n=2, m=1, d=1 only")
        shards = list(range(1, Q + 1))
        args = [(chart, Q, a2, box, t, keep_samples) for a2 in shards]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                parts = list(ex.map(_fast_shard, args, chunksize=max(1, Q // (4 * jobs))))
        else:
            parts = [_fast_shard(a) for a in args]
        for cnt, und, smp in parts:
            res.count += cnt
            res.undecidable += und
            res.samples.extend(smp)
    elif method == "exact":
        for pt in enumerate_algebraic_points(n, m, Q):
            verdict = decide_point(list(pt.coordinates), chart, box, t)
            if verdict == UNDECIDED and m == 1:
                verdict = quadratic_field_decision(pt.minimal_polynomial, pt.root_indices[0],
                                                   chart, box, t)
            if verdict == TRUE:
                res.count += 1
                if keep_samples:
                    res.samples.append(pt.ident)
            elif verdict == UNDECIDED:
                res.undecidable += 1
    else:
        raise ValueError(f"unknown method {method!r}")
    if keep_samples:
        res.samples.sort()
    res.wall_ms = (time.perf_counter() - start) * 1e3
    return res


def _float_coeffs(p: SparsePolynomial) -> List[float]:
    deg = max(e[0] for e, _ in p.items()) if p else 0
    out = [0.0] * (deg + 1)
    for e, c in p.items():
        out[e[0]] = float(c)
    return out


def _fast_shard(args) -> Tuple[int, int, List[Tuple]]:
    chart, Q, a2, box, t, keep = args
    (lo, hi), = box
    f1 = chart.components[0]
    fc = _float_coeffs(f1)
    flo, fhi = float(lo), float(hi)
    t_f = float(t[0])
    a1, a0 = np.meshgrid(np.arange(-Q, Q + 1, dtype=np.int64),
                         np.arange(-Q, Q + 1, dtype=np.int64), indexing="ij")
    a1, a0 = a1.ravel(), a0.ravel()
    D = a1 * a1 - 4 * a2 * a0
    s = np.floor(np.sqrt(np.maximum(D, 0).astype(np.float64))).astype(np.int64)
    s = np.where((s + 1) * (s + 1) <= D, s + 1, s)
    s = np.where(s * s > D, s - 1, s)
    g = np.gcd(np.gcd(a1, a0), a2)
    keep_mask = (D > 0) & (s * s != D) & (g == 1)
    a1, a0, D = a1[keep_mask], a0[keep_mask], D[keep_mask]
    sq = np.sqrt(D.astype(np.float64))
    qv = -0.5 * (a1 + np.where(a1 >= 0, 1.0, -1.0) * sq)
    r_a = qv / a2
    r_b = a0 / qv
    count = und = 0
    samples: List[Tuple] = []
    for x0, x1 in ((r_a, r_b), (r_b, r_a)):
        m1, m2 = x0 - flo, fhi - x0
        val = np.polynomial.polynomial.polyval(x0, fc)
        m3 = t_f - np.abs(val - x1)
        yes = (m1 > FAST_GUARD) & (m2 > FAST_GUARD) & (m3 > FAST_GUARD)
        no = (m1 < -FAST_GUARD) | (m2 < -FAST_GUARD) | (m3 < -FAST_GUARD)
        count += int(yes.sum())
        if keep:
            for i in np.nonzero(yes)[0]:
                samples.append(_fast_ident(a2, int(a1[i]), int(a0[i]), float(x0[i])))
        for i in np.nonzero(~(yes | no))[0]:
            verdict, ident = _exact_quadratic(a2, int(a1[i]), int(a0[i]), float(x0[i]),
                                              chart, box, t)
            if verdict == TRUE:
                count += 1
                if keep:
                    samples.append(ident)
            elif verdict == UNDECIDED:
                und += 1
    return count, und, samples


def _fast_ident(a2: int, a1: int, a0: int, x0: float) -> Tuple:
    P = IntegerPolynomial((a0, a1, a2))
    roots = sturm_isolate(P)
    i = 0 if abs(roots[0].approx() - x0) < abs(roots[1].approx() - x0) else 1
    return (P.coeffs, (i, 1 - i))


def _exact_quadratic(a2: int, a1: int, a0: int, x0: float, chart: Chart,
                     box: List[Interval], t: Interval):
    P = IntegerPolynomial((a0, a1, a2))
    roots = sturm_isolate(P)
    # the two real roots are well separated relative to float error
    i = 0 if abs(roots[0].approx() - x0) < abs(roots[1].approx() - x0) else 1
    coords = [roots[i], roots[1 - i]]
    verdict = decide_point(coords, chart, box, t)
    if verdict == UNDECIDED:
        verdict = quadratic_field_decision(P, i, chart, box, t)
    return verdict, (P.coeffs, (i, 1 - i))


# -- exact arithmetic in Q(sqrt D) ---------------------------------------------

def _qf_mul(x, y, D):
    return (x[0] * y[0] + D * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _qf_sign(x, D) -> int:
    u, v = x
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0 or su == sv:
        return su or sv
    if su == 0:
        return sv
    return su if u * u > D * v * v else sv


def quadratic_field_decision(P: IntegerPolynomial, i: int, chart: Chart,
                             J: Sequence[Interval], t: Interval) -> int:
    """Exact verdict for the ordered root pair ``(r_i, r_{1-i})`` of a quadratic.

    Works in ``Q(sqrt D)``, so ties on the threshold are settled. Needs ``d = 1``,
    ``m = 1`` and a rational threshold; otherwise returns ``UNDECIDED``.
    """
    if P.degree != 2 or chart.d != 1 or chart.m != 1 or t[0] != t[1]:
        return UNDECIDED
    a0, a1, a2 = (Fraction(c) for c in P.coeffs)
    D = int(a1 * a1 - 4 * a2 * a0)
    sigma = 1 if (i == 1) == (a2 > 0) else -1
    r = (-a1 / (2 * a2), Fraction(sigma) / (2 * a2))
    s = (r[0], -r[1])
    (lo, hi), = J
    if _qf_sign((r[0] - lo, r[1]), D) <= 0 or _qf_sign((hi - r[0], -r[1]), D) <= 0:
        return FALSE
    fr = (Fraction(0), Fraction(0))
    comp = chart.components[0]
    deg = comp.total_degree()
    for k in range(deg, -1, -1):
        fr = _qf_mul(fr, r, D)
        fr = (fr[0] + comp.coefficient((k,)), fr[1])
    w = (fr[0] - s[0], fr[1] - s[1])
    thr = t[0]
    inside = _qf_sign((thr - w[0], -w[1]), D) > 0 and _qf_sign((thr + w[0], w[1]), D) > 0
    return TRUE if inside else FALSE


# -- exponent fit ------------------------------------------------------------

def fit_exponent(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Least squares of ``log count`` against ``log Q``: (slope, intercept, rms residual)."""
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least three points")
    if any(c <= 0 or q <= 0 for q, c in pts):
        raise ValueError("counts and Q must be positive")
    x = np.log([float(q) for q, _ in pts])
    y = np.log([float(c) for _, c in pts])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2)))
