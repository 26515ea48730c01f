"""Vandermonde-system matrices, Pluecker minors, scaling parameters and exact
lattice enumeration in the sup norm.

Lattices are ``B * Z^k`` for a square rational matrix ``B`` whose columns are
the basis vectors. Enumeration scales the box to the unit cube, reduces the
basis with a floating-point LLL pass that only ever applies integer column
operations (so the lattice is unchanged), runs a Fincke-Pohst search in a
slightly inflated Euclidean ball and confirms every candidate exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .groebner import BudgetExceeded
from .linalg import IncrementalRank, Matrix, _bareiss, _clear_denominators, det, index_sets, minor
from .symmetric import BOX, SchurIndexSet, partition_from_columns, schur

MAX_SVP_DIM = 10
MAX_MINIMA_DIM = 8
DEFAULT_MAX_NODES = 2_000_000


# -- matrices ----------------------------------------------------------------

def _fractions(vals) -> List[Fraction]:
    return [Fraction(v) for v in vals]


def build_M(n: int, fvals: Sequence) -> Matrix:
    """Rows ``(1, f_i, ..., f_i^n)`` for each value, then ``[0 | I_{n-m}]``."""
    f = _fractions(fvals)
    m = len(f) - 1
    if m < 0 or not m < n:
        raise ValueError(f"need 1 <= len(fvals) <= n, got {len(f)} values for n={n}")
    rows = [[x ** j for j in range(n + 1)] for x in f]
    for k in range(m + 1, n + 1):
        rows.append([Fraction(int(j == k)) for j in range(n + 1)])
    return rows


def derivative_row(n: int, x: Fraction) -> List[Fraction]:
    x = Fraction(x)
    return [Fraction(0)] + [j * x ** (j - 1) for j in range(1, n + 1)]


def build_U(n: int, h: int, fvals: Sequence) -> Matrix:
    """Rows ``v_0..v_m``, ``v'_h``, then ``[0 | I_{n-m-1}]``."""
    f = _fractions(fvals)
    m = len(f) - 1
    if m < 0 or not m + 1 < n + 1:
        raise ValueError(f"need len(fvals) <= n, got {len(f)} values for n={n}")
    if not 0 <= h <= m:
        raise ValueError(f"h={h} out of range 0..{m}")
    rows = [[x ** j for j in range(n + 1)] for x in f]
    rows.append(derivative_row(n, f[h]))
    for k in range(m + 2, n + 1):
        rows.append([Fraction(int(j == k)) for j in range(n + 1)])
    return rows


def vandermonde(fvals: Sequence) -> Fraction:
    """``prod_{i<j} (f_j - f_i)``."""
    f = _fractions(fvals)
    out = Fraction(1)
    for i, j in combinations(range(len(f)), 2):
        out *= f[j] - f[i]
    return out


PluckerVector = Dict[Tuple[int, ...], Fraction]


def _check_rows(A, I) -> Tuple[int, ...]:
    I = tuple(I)
    nrows = len(A)
    if not I or list(I) != sorted(set(I)) or I[0] < 0 or I[-1] >= nrows:
        raise ValueError(f"invalid row index set {I}")
    if len(I) > len(A[0]):
        raise ValueError(f"|I|={len(I)} exceeds the column count {len(A[0])}")
    return I


def grass(A: Sequence[Sequence], I: Sequence[int]) -> PluckerVector:
    """All ``tau x tau`` minors ``det A_{I,J}`` over increasing ``J``, lexicographic."""
    I = _check_rows(A, I)
    rows, scale = _clear_denominators([[Fraction(x) for x in A[i]] for i in I])
    return {J: Fraction(_bareiss([[r[j] for j in J] for r in rows]), scale)
            for J in index_sets(len(A[0]), len(I))}


def wedge_transform(A: Sequence[Sequence], wedge_components: PluckerVector,
                    I: Sequence[int]) -> Fraction:
    """``sum_J det A_{I,J} * w_J``: the ``e_I`` component of ``A`` applied to a wedge.

    ``wedge_components[J]`` is ``det W_{J,[tau]}`` for an integer frame ``W``.
    """
    I = _check_rows(A, I)
    tau = len(I)
    keys = index_sets(len(A[0]), tau)
    if set(wedge_components) != set(keys):
        raise ValueError("wedge components do not match the column index sets")
    return sum((Fraction(minor(A, I, J)) * Fraction(wedge_components[J]) for J in keys),
               Fraction(0))


def frame_components(W: Sequence[Sequence]) -> PluckerVector:
    """Pluecker coordinates ``det W_{J,[tau]}`` of the column frame ``W``."""
    tau = len(W[0])
    cols = tuple(range(tau))
    return {J: Fraction(minor(W, J, cols)) for J in index_sets(len(W), tau)}


@dataclass
class FactorizationReport:
    ok: bool
    diff: Dict[Tuple[int, ...], Tuple[Fraction, Fraction]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def schur_factorization_check(n: int, fvals: Sequence, I: Sequence[int]) -> FactorizationReport:
    """Compare ``grass_I(M)`` with ``V(f_I) * s_lambda(f_I)`` under ``J <-> lambda``."""
    f = _fractions(fvals)
    I = tuple(I)
    if any(i >= len(f) for i in I):
        raise ValueError("rows in I must be value rows of M")
    M = build_M(n, f)
    g = grass(M, I)
    tau = len(I)
    fI = [f[i] for i in I]
    V = vandermonde(fI)
    index = SchurIndexSet.build(n, tau, BOX)
    if len(index) != len(g):
        return FactorizationReport(False, {(): (Fraction(len(index)), Fraction(len(g)))})
    diff = {}
    for J, lhs in g.items():
        lam = partition_from_columns(J)
        rhs = V * schur(lam, tau).evaluate(fI)
        if lhs != rhs:
            diff[J] = (lhs, rhs)
    return FactorizationReport(not diff, diff)


# -- approximation profiles --------------------------------------------------

def iroot(a: int, k: int) -> int:
    """``floor(a ** (1/k))`` for ``a >= 0``."""
    if a < 0:
        raise ValueError("negative radicand")
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // k)
    while True:
        y = ((k - 1) * x + a // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > a:
        x -= 1
    while (x + 1) ** k <= a:
        x += 1
    return x


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """``base ** exponent`` when it is rational, else ``None``."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    q = exponent.denominator
    num, den = base.numerator, base.denominator
    rn, rd = iroot(num, q), iroot(den, q)
    if rn ** q != num or rd ** q != den:
        return None
    return Fraction(rn, rd) ** exponent.numerator


@dataclass(frozen=True)
class PowerLaw:
    """``Q -> coeff * Q ** exponent``."""

    coeff: Fraction
    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        if self.coeff <= 0:
            raise ValueError(f"power-law coefficient must be positive, got {self.coeff}")

    @classmethod
    def parse(cls, text: str) -> "PowerLaw":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"power law must be 'coeff, exponent', got {text!r}")
        return cls(Fraction(parts[0]), Fraction(parts[1]))

    def __str__(self) -> str:
        return f"{self.coeff}, {self.exponent}"

    def __mul__(self, other: "PowerLaw") -> "PowerLaw":
        return PowerLaw(self.coeff * other.coeff, self.exponent + other.exponent)

    def exact(self, Q) -> Optional[Fraction]:
        p = rational_power(Fraction(Q), self.exponent)
        return None if p is None else self.coeff * p

    def value(self, Q) -> Fraction:
        """Exact value when rational, otherwise the nearest double as a fraction."""
        v = self.exact(Q)
        if v is not None:
            return v
        return Fraction(float(self.coeff) * float(Q) ** float(self.exponent))

    def log(self, Q) -> float:
        return math.log(self.coeff) + float(self.exponent) * math.log(Q)


@dataclass(frozen=True)
class ApproximationProfile:
    n: int
    m: int
    d: int
    psi: Tuple[PowerLaw, ...]
    phi: Tuple[PowerLaw, ...]

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(self.psi))
        object.__setattr__(self, "phi", tuple(self.phi))
        if not self.n > self.m >= 0:
            raise ValueError(f"need n > m >= 0, got n={self.n}, m={self.m}")
        if self.d < 1:
            raise ValueError("d must be positive")
        if len(self.psi) != self.m + 1 or len(self.phi) != self.n - self.m:
            raise ValueError(f"need {self.m + 1} psi laws and {self.n - self.m} phi laws")

    def laws(self) -> Tuple[PowerLaw, ...]:
        return self.psi + self.phi

    def product_law(self) -> PowerLaw:
        out = PowerLaw(1, 0)
        for law in self.laws():
            out = out * law
        return out

    def psi_values(self, Q) -> List[Fraction]:
        return [law.value(Q) for law in self.psi]

    def phi_values(self, Q) -> List[Fraction]:
        return [law.value(Q) for law in self.phi]


@dataclass(frozen=True)
class ScalingParameters:
    t: Tuple[float, ...]
    delta: float

    def check(self, profile: ApproximationProfile, Q, rel: float = 1e-12) -> None:
        lhs = (profile.m + 1 + profile.n - profile.m) * math.log(self.delta)
        rhs = profile.product_law().log(Q)
        if abs(lhs - rhs) > rel * max(1.0, abs(rhs)):
            raise AssertionError(f"delta product rule fails: {lhs} vs {rhs}")
        lo = sum(self.t[:profile.m + 1])
        hi = sum(self.t[profile.m + 1:])
        if abs(lo - hi) > rel * max(1.0, abs(lo), abs(hi)):
            raise AssertionError(f"t balance fails: {lo} vs {hi}")


def scaling_parameters(profile: ApproximationProfile, Q) -> ScalingParameters:
    """``log delta`` is the mean of the log profile values; ``t`` measures each law against it."""
    if Fraction(Q) < 1:
        raise ValueError("Q must be at least 1")
    logs = [law.log(Q) for law in profile.laws()]
    log_delta = sum(logs) / (profile.n + 1)
    m = profile.m
    t = tuple(log_delta - v for v in logs[:m + 1]) + tuple(v - log_delta for v in logs[m + 1:])
    return ScalingParameters(t, math.exp(log_delta))


# -- enumeration engine ------------------------------------------------------

def _lll(S: np.ndarray, delta: float = 0.99) -> List[List[int]]:
    """Integer unimodular ``U`` with ``S @ U`` LLL-reduced (floating point guidance)."""
    k = S.shape[1]
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    b = S.copy()
    i = 1
    guard = 0
    while i < k:
        guard += 1
        if guard > 100_000:
            break
        _, R = np.linalg.qr(b)
        for j in range(i - 1, -1, -1):
            q = round(R[j, i] / R[j, j])
            if q:
                b[:, i] -= q * b[:, j]
                R[:, i] -= q * R[:, j]
                for row in U:
                    row[i] -= q * row[j]
        mu = R[i - 1, i] / R[i - 1, i - 1]
        if R[i, i] ** 2 >= (delta - mu * mu) * R[i - 1, i - 1] ** 2:
            i += 1
        else:
            b[:, [i - 1, i]] = b[:, [i, i - 1]]
            for row in U:
                row[i - 1], row[i] = row[i], row[i - 1]
            i = max(i - 1, 1)
    return U


class _Checker:
    """Exact test ``|(B z)_i| (<|<=) w_i`` with integer arithmetic per row."""

    def __init__(self, B: Sequence[Sequence[Fraction]], widths: Sequence[Fraction],
                 strict: Sequence[bool]):
        self.rows = []
        for row, w, s in zip(B, widths, strict):
            den = 1
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
            ints = [int(x * den) for x in row]
            bound = Fraction(w) * den
            self.rows.append((ints, bound.numerator, bound.denominator, s))

    def __call__(self, z: Sequence[int]) -> bool:
        for ints, bn, bd, s in self.rows:
            v = abs(sum(a * b for a, b in zip(ints, z))) * bd
            if v > bn or (s and v == bn):
                return False
        return True


def _as_matrix(basis) -> Matrix:
    B = [[Fraction(x) for x in row] for row in basis]
    k = len(B)
    if k == 0 or any(len(r) != k for r in B):
        raise ValueError("basis must be a nonempty square matrix")
    return B


def enumerate_box(basis, widths: Sequence, strict: Optional[Sequence[bool]] = None,
                  first_only: bool = False, max_nodes: int = DEFAULT_MAX_NODES,
                  accept: Optional[Callable[[Tuple[int, ...]], bool]] = None) -> List[Tuple[int, ...]]:
    """Nonzero ``z`` with ``|(B z)_i| < w_i`` (strict) or ``<= w_i``, one of each ``+-z`` pair.

    ``accept`` is an optional extra exact filter on coefficient vectors.
    """
    B = _as_matrix(basis)
    k = len(B)
    widths = [Fraction(w) for w in widths]
    if len(widths) != k or any(w <= 0 for w in widths):
        raise ValueError("widths must be positive, one per row")
    strict = list(strict) if strict is not None else [False] * k
    if det(B) == 0:
        raise ValueError("singular basis")
    S = np.array([[float(B[i][j] / widths[i]) for j in range(k)] for i in range(k)])
    U = _lll(S)
    Ur = np.array(U, dtype=float)
    _, R = np.linalg.qr(S @ Ur)
    check = _Checker(B, widths, strict)
    r2 = k * (1 + 1e-9) + 1e-9
    tol = 1e-9 * r2
    out: List[Tuple[int, ...]] = []
    z = [0] * k
    nodes = 0

    class _Stop(Exception):
        pass

    def emit():
        zz = tuple(sum(U[i][j] * z[j] for j in range(k)) for i in range(k))
        if check(zz) and (accept is None or accept(zz)):
            out.append(zz)
            if first_only:
                raise _Stop

    def rec(i: int, rem: float, top: bool):
        nonlocal nodes
        s = sum(R[i, j] * z[j] for j in range(i + 1, k))
        rii = R[i, i]
        c = -s / rii
        half = math.sqrt(max(rem, 0.0)) / abs(rii)
        lo = math.ceil(c - half - 1e-9)
        hi = math.floor(c + half + 1e-9)
        if top:
            lo = max(lo, 0)
        for zi in range(lo, hi + 1):
            d = rii * zi + s
            nrem = rem - d * d
            if nrem < -tol:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded(f"lattice enumeration exceeded {max_nodes} nodes")
            z[i] = zi
            if i == 0:
                if any(z):
                    emit()
            else:
                rec(i - 1, nrem, top and zi == 0)
        z[i] = 0

    try:
        rec(k - 1, r2, True)
    except _Stop:
        pass
    return out


def reduced_columns(B: Matrix, widths: Sequence[Fraction]) -> List[Tuple[int, ...]]:
    """Coefficient vectors of an LLL-reduced basis for the box metric given by ``widths``."""
    k = len(B)
    S = np.array([[float(B[i][j] / widths[i]) for j in range(k)] for i in range(k)])
    U = _lll(S)
    return [tuple(U[i][j] for i in range(k)) for j in range(k)]


def sup_norm(v: Sequence) -> Fraction:
    return max(abs(Fraction(x)) for x in v)


def lattice_vector(B: Sequence[Sequence], z: Sequence[int]) -> List[Fraction]:
    return [sum((Fraction(x) * c for x, c in zip(row, z)), Fraction(0)) for row in B]


def _canonical(z: Sequence[int]) -> Tuple[int, ...]:
    lead = next((c for c in z if c), 0)
    return tuple(z) if lead > 0 else tuple(-c for c in z)


@dataclass(frozen=True)
class ShortVector:
    coeffs: Tuple[int, ...]
    vector: Tuple[Fraction, ...]
    norm: Fraction


def shortest_vector(basis, bound, max_nodes: int = DEFAULT_MAX_NODES) -> Optional[ShortVector]:
    """Nonzero lattice vector of least sup norm, if that norm is below ``bound``.

    Ties go to the lexicographically smallest coefficient vector whose first
    nonzero entry is positive.
    """
    B = _as_matrix(basis)
    k = len(B)
    if k > MAX_SVP_DIM:
        raise ValueError(f"dimension {k} exceeds the cap {MAX_SVP_DIM}")
    bound = Fraction(bound)
    if bound <= 0:
        return None
    if det(B) == 0:
        raise ValueError("singular basis")
    cols = [sup_norm(lattice_vector(B, z)) for z in reduced_columns(B, [Fraction(1)] * k)]
    radius = min(bound, min(cols))
    strict = radius == bound
    best = None
    for z in enumerate_box(B, [radius] * k, [strict] * k, max_nodes=max_nodes):
        z = _canonical(z)
        v = lattice_vector(B, z)
        key = (sup_norm(v), z)
        if best is None or key < best[0]:
            best = (key, v)
    if best is None:
        return None
    (norm, z), v = best
    if norm >= bound:
        return None
    return ShortVector(z, tuple(v), norm)


@dataclass(frozen=True)
class ConvexBody:
    """The box ``{|y_i| <= half_widths[i]}``; ``strict`` marks open faces."""

    half_widths: Tuple[Fraction, ...]
    strict: Tuple[bool, ...] = ()

    def __post_init__(self):
        hw = tuple(Fraction(h) for h in self.half_widths)
        if not hw or any(h <= 0 for h in hw):
            raise ValueError("half widths must be positive")
        object.__setattr__(self, "half_widths", hw)
        st = tuple(self.strict) or (False,) * len(hw)
        if len(st) != len(hw):
            raise ValueError("one strictness flag per axis")
        object.__setattr__(self, "strict", st)

    @property
    def dim(self) -> int:
        return len(self.half_widths)

    def volume(self) -> Fraction:
        v = Fraction(2) ** self.dim
        for h in self.half_widths:
            v *= h
        return v

    def gauge(self, y: Sequence) -> Fraction:
        return max(abs(Fraction(a)) / h for a, h in zip(y, self.half_widths))

    def scaled(self, r) -> "ConvexBody":
        return ConvexBody(tuple(h * Fraction(r) for h in self.half_widths), self.strict)


@dataclass(frozen=True)
class SuccessiveMinima:
    minima: Tuple[Fraction, ...]
    witnesses: Tuple[Tuple[int, ...], ...]


def successive_minima(basis, body: ConvexBody, max_nodes: int = DEFAULT_MAX_NODES) -> SuccessiveMinima:
    """Exact successive minima of ``body`` with respect to ``basis * Z^k``.

    The search radius doubles until the enumerated vectors span the space;
    greedy selection in increasing gauge order then yields the minima.
    """
    B = _as_matrix(basis)
    k = len(B)
    if k > MAX_MINIMA_DIM:
        raise ValueError(f"dimension {k} exceeds the cap {MAX_MINIMA_DIM}")
    if body.dim != k:
        raise ValueError("body dimension does not match the lattice")
    if det(B) == 0:
        raise ValueError("singular basis")
    col_gauges = sorted(body.gauge(lattice_vector(B, z))
                        for z in reduced_columns(B, body.half_widths))
    cap = col_gauges[-1]
    radius = col_gauges[0]
    while True:
        radius = min(radius, cap)
        widths = [h * radius for h in body.half_widths]
        found = enumerate_box(B, widths, max_nodes=max_nodes)
        cands = sorted(((body.gauge(lattice_vector(B, z)), _canonical(z)) for z in found))
        span = IncrementalRank(k)
        minima, wit = [], []
        for g, z in cands:
            if span.add(z):
                minima.append(g)
                wit.append(z)
                if len(minima) == k:
                    break
        if len(minima) == k:
            return SuccessiveMinima(tuple(minima), tuple(wit))
        if radius >= cap:
            raise AssertionError("enumeration missed the basis vectors")
        radius *= 2


def minkowski_sandwich(basis, body: ConvexBody, minima: Sequence[Fraction]) -> bool:
    """``2^k/k! det <= prod(lambda) vol <= 2^k det``, exactly."""
    k = body.dim
    d = abs(Fraction(det(_as_matrix(basis))))
    prod = Fraction(1)
    for lam in minima:
        prod *= lam
    middle = prod * body.volume()
    return Fraction(2 ** k, math.factorial(k)) * d <= middle <= 2 ** k * d


# -- bad set -----------------------------------------------------------------

class SingularSystem(ValueError):
    def __init__(self, h: int):
        super().__init__(f"det U^{h} vanishes at this point")
        self.h = h


def bad_set_indicator(x_fvals: Sequence, profile: ApproximationProfile, Q,
                      max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """True iff some nonzero integer ``P`` of degree ``<= n`` satisfies

    ``|P(f_k)| < psi_k`` for ``k <= m``, ``|P'(f_i)| <= phi_{m+1}`` for every
    ``i <= m`` and ``|a_k| <= phi_k`` for ``k > m+1``.

    The search runs in the lattice ``U^0 Z^{n+1}``; the remaining derivative
    rows are exact side conditions. Each ``U^h`` must be nonsingular.
    """
    f = _fractions(x_fvals)
    n, m = profile.n, profile.m
    if len(f) != m + 1:
        raise ValueError(f"expected {m + 1} values, got {len(f)}")
    Us = [build_U(n, h, f) for h in range(m + 1)]
    for h, U in enumerate(Us):
        if det(U) == 0:
            raise SingularSystem(h)
    psi = profile.psi_values(Q)
    phi = profile.phi_values(Q)
    widths = psi + phi
    strict = [True] * (m + 1) + [False] * (n - m)
    extra = [derivative_row(n, f[h]) for h in range(1, m + 1)]
    check = _Checker(extra, [phi[0]] * len(extra), [False] * len(extra)) if extra else None
    hits = enumerate_box(Us[0], widths, strict, first_only=True, max_nodes=max_nodes,
                         accept=check)
    return bool(hits)


def measure_estimate(ball: Sequence[Tuple[float, float]], chart: Callable[[Sequence[Fraction]], Sequence[Fraction]],
                     profile: ApproximationProfile, Q, samples: int, seed: int,
                     max_nodes: int = DEFAULT_MAX_NODES) -> Fraction:
    """Fraction of ``samples`` uniform points of ``ball`` lying in the bad set.

    Points come from a counter-based generator keyed by ``seed``, so sample
    ``i`` is the same however the work is split. Points with a singular
    ``U^h`` are rejected and left out of the denominator.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    hits = valid = 0
    for x in sample_points(ball, samples, seed):
        try:
            bad = bad_set_indicator(chart(x), profile, Q, max_nodes=max_nodes)
        except SingularSystem:
            continue
        valid += 1
        hits += bad
    if not valid:
        raise ValueError("every sample point gave a singular system")
    return Fraction(hits, valid)


def sample_points(ball: Sequence[Tuple[float, float]], samples: int, seed: int) -> List[List[Fraction]]:
    """Uniform points as exact dyadic fractions, drawn from a Philox stream."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    lo = np.array([a for a, _ in ball], dtype=float)
    hi = np.array([b for _, b in ball], dtype=float)
    if np.any(hi <= lo):
        raise ValueError("empty sampling box")
    u = gen.random((samples, len(ball)))
    pts = lo + u * (hi - lo)
    return [[Fraction(float(v)) for v in row] for row in pts]
