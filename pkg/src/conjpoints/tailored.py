"""Construction of tailored polynomials at a manifold point.

Pipeline: successive-minima witnesses of ``M Z^{n+1}`` in the box built from
the profile, a prime just above ``c'``, and an Eisenstein twist that turns the
witnesses into ``n+1`` independent irreducible polynomials. Every inequality is
recorded with exact left and right sides so a certificate can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import BudgetExceeded
from .lattice import (DEFAULT_MAX_NODES, ApproximationProfile, ConvexBody, build_M, enumerate_box,
                      lattice_vector, successive_minima)
from .linalg import det, matvec, rank, solve_mod_p
from .univariate import IntegerPolynomial, is_eisenstein


def _frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class TailoredConstants:
    delta0: Fraction
    deltaN: Fraction
    cPrime: Fraction
    cY: Fraction
    cF: Fraction
    kappa: Fraction
    cY_alt: Fraction  # the second printed form, kept for comparison only

    @classmethod
    def derive(cls, n: int, detM, delta0, delta_min, delta_max, cF) -> "TailoredConstants":
        delta0, cF = Fraction(delta0), Fraction(cF)
        delta_min, delta_max = Fraction(delta_min), Fraction(delta_max)
        if min(delta0, cF, delta_min, delta_max) <= 0:
            raise ValueError("constants must be positive")
        deltaN = abs(Fraction(detM)) / (delta_min * delta0 ** n)
        cPrime = 2 ** (n + 1) * delta_max * deltaN ** (n + 1)
        cY = 4 * (n + 1) * deltaN * cPrime ** 2
        cY_alt = 2 ** (2 * n + 4) * (n + 1) * delta_max ** 2 * deltaN ** (2 * n + 3)
        return cls(delta0, deltaN, cPrime, cY, cF, cY / cF, cY_alt)

    def as_dict(self) -> Dict[str, str]:
        return {k: _frac_str(getattr(self, k)) for k in
                ("delta0", "deltaN", "cPrime", "cY", "cF", "kappa", "cY_alt")}


class TailoringError(RuntimeError):
    """Construction failure; ``stage`` names the step that failed."""

    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"{stage}: {detail}" if detail else stage)
        self.stage = stage


# -- primes ------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for ``n < 3.3e24``, trial division below."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(x) -> int:
    """Smallest prime strictly greater than ``x``."""
    k = math.floor(Fraction(x)) + 1
    while not is_prime(k):
        k += 1
    return k


def bertrand_prime(cPrime) -> int:
    """Smallest prime in ``(c', 2c')``; for ``c' < 2`` the smallest prime above ``c'``."""
    c = Fraction(cPrime)
    if c < 1:
        raise ValueError("c' must be at least 1")
    p = next_prime(c)
    if c >= 2 and not p < 2 * c:
        raise AssertionError(f"no prime in ({c}, {2 * c})")
    return p


# -- Eisenstein twist ----------------------------------------------------------

def eisenstein_twist(A: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    """Return the ``n+1`` vectors ``eta_l``; the twisted coefficients are ``A eta_l``.

    ``A`` holds the coefficient vectors as columns.
    """
    A = [[int(x) for x in row] for row in A]
    k = len(A)
    b = [0] * (k - 1) + [1]
    t = solve_mod_p(A, b, p)
    if t is None:
        raise TailoringError("bad prime", f"det A vanishes mod {p}")
    At = matvec(A, t)
    w = [(x - y) // p for x, y in zip(At, b)]
    if any(x - y != p * wi for x, y, wi in zip(At, b, w)):
        raise AssertionError("A t - b is not divisible by p")
    etas = []
    for ell in range(k):
        # r[0] must be a unit mod p; for p > 2 the differences r_l - r_0 together
        # with b form a basis mod p, which forces det(eta) != 0
        r = [1] + [0] * (k - 1)
        if 1 <= ell < k - 1:
            r[ell] = 1
        elif ell == k - 1 and ell:
            if p > 2:
                r[0] = 2
            else:
                r[ell] = 1
        g = solve_mod_p(A, [-wi + ri for wi, ri in zip(w, r)], p)
        etas.append([ti + p * gi for ti, gi in zip(t, g)])
    return etas


def twisted_polynomials(A: Sequence[Sequence[int]], p: int) -> Tuple[List[IntegerPolynomial], List[List[int]]]:
    etas = eisenstein_twist(A, p)
    polys = [IntegerPolynomial(tuple(matvec(A, eta))) for eta in etas]
    return polys, etas


# -- certificates --------------------------------------------------------------

@dataclass
class Inequality:
    kind: str  # value | coefficient | derivative
    index: int
    lhs: Fraction
    rhs: Fraction
    strict: bool

    def holds(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    def as_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "index": self.index, "lhs": _frac_str(self.lhs),
                "rhs": _frac_str(self.rhs), "op": "<" if self.strict else "<=",
                "holds": self.holds()}


@dataclass
class PolynomialCertificate:
    polynomial: IntegerPolynomial
    prime: int
    eisenstein: bool
    bounds: List[Inequality]
    derivative: List[Inequality]

    @property
    def bounds_hold(self) -> bool:
        return all(i.holds() for i in self.bounds)

    @property
    def derivative_holds(self) -> bool:
        return all(i.holds() for i in self.derivative)

    def as_dict(self) -> Dict[str, object]:
        return {"coefficients": list(self.polynomial.coeffs), "prime": self.prime,
                "eisenstein": self.eisenstein,
                "bounds": [i.as_dict() for i in self.bounds],
                "derivative": [i.as_dict() for i in self.derivative]}


@dataclass
class TailoredResult:
    polynomials: List[IntegerPolynomial]
    certificates: List[PolynomialCertificate]
    constants: TailoredConstants
    prime: int
    minima: Tuple[Fraction, ...]
    independent: bool
    psi: List[Fraction] = field(default_factory=list)
    phi: List[Fraction] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.independent and len(self.polynomials) == len(self.minima)
                and all(c.eisenstein and c.bounds_hold for c in self.certificates))


def _abs_value(P: IntegerPolynomial, x: Fraction) -> Fraction:
    return abs(P(Fraction(x)))


def certify(P: IntegerPolynomial, fvals: Sequence[Fraction], psi: Sequence[Fraction],
            phi: Sequence[Fraction], constants: TailoredConstants, p: int) -> PolynomialCertificate:
    m = len(fvals) - 1
    n = m + len(phi)
    coeffs = list(P.coeffs) + [0] * (n + 1 - len(P.coeffs))
    bounds = [Inequality("value", k, _abs_value(P, fvals[k]), constants.cY * psi[k], True)
              for k in range(m + 1)]
    bounds += [Inequality("coefficient", k, Fraction(abs(coeffs[k])),
                          constants.cY * phi[k - m - 1], False) for k in range(m + 1, n + 1)]
    dP = P.derivative()
    deriv = [Inequality("derivative", k, -_abs_value(dP, fvals[k]), -constants.cF * phi[0], True)
             for k in range(m + 1)]
    return PolynomialCertificate(P, p, is_eisenstein(P, p), bounds, deriv)


def replay(cert: PolynomialCertificate, fvals: Sequence[Fraction], psi, phi,
           constants: TailoredConstants) -> bool:
    """Recompute every recorded inequality from scratch and compare."""
    fresh = certify(cert.polynomial, fvals, psi, phi, constants, cert.prime)
    same = [(a.lhs, a.rhs, a.strict) for a in fresh.bounds] == \
           [(a.lhs, a.rhs, a.strict) for a in cert.bounds]
    return same and fresh.bounds_hold and fresh.eisenstein == cert.eisenstein


def minkowski_solutions(fvals: Sequence, profile: ApproximationProfile, Q,
                        max_nodes: int = DEFAULT_MAX_NODES):
    """Successive minima and witnesses of the profile box for ``M Z^{n+1}``."""
    n, m = profile.n, profile.m
    M = build_M(n, fvals)
    if det(M) == 0:
        raise TailoringError("singular M", "two values coincide")
    body = ConvexBody(tuple(profile.psi_values(Q) + profile.phi_values(Q)))
    return M, body, successive_minima(M, body, max_nodes=max_nodes)


def check_profile(profile: ApproximationProfile, Q) -> None:
    phi = profile.phi_values(Q)
    if phi[0] != max([Fraction(Q)] + phi[1:]):
        raise TailoringError("profile", "phi_{m+1} must equal max(Q, phi_{m+2}, ..., phi_n)")


def construct_tailored(fvals: Sequence, profile: ApproximationProfile, Q, delta0,
                       cF, delta_min=None, delta_max=None,
                       max_nodes: int = DEFAULT_MAX_NODES) -> TailoredResult:
    """Build and certify ``n+1`` tailored polynomials at the point with values ``fvals``.

    ``delta_min``/``delta_max`` default to the profile product at ``Q``.
    Raises :class:`TailoringError` naming the failed stage.
    """
    f = [Fraction(v) for v in fvals]
    n, m = profile.n, profile.m
    if len(f) != m + 1:
        raise TailoringError("input", f"expected {m + 1} values")
    check_profile(profile, Q)
    psi, phi = profile.psi_values(Q), profile.phi_values(Q)
    vol = Fraction(1)
    for v in psi + phi:
        vol *= v
    delta_min = vol if delta_min is None else Fraction(delta_min)
    delta_max = vol if delta_max is None else Fraction(delta_max)
    if not delta_min <= vol <= delta_max:
        raise TailoringError("profile", "volume product outside [delta_min, delta_max]")
    M = build_M(n, f)
    if det(M) == 0:
        raise TailoringError("singular M", "two values coincide")
    d0 = Fraction(delta0)
    # cheap early exit before the full minima search
    if enumerate_box(M, [w * d0 for w in psi + phi], first_only=True, max_nodes=max_nodes):
        raise TailoringError("lambda0 below delta0", f"a nonzero point lies in {d0} K")
    try:
        M, body, sm = minkowski_solutions(f, profile, Q, max_nodes=max_nodes)
    except BudgetExceeded as exc:
        raise TailoringError("minima budget", str(exc)) from exc
    constants = TailoredConstants.derive(n, det(M), delta0, delta_min, delta_max, cF)
    if sm.minima[0] <= constants.delta0:
        raise TailoringError("lambda0 below delta0", f"{sm.minima[0]} <= {constants.delta0}")
    if sm.minima[-1] > constants.deltaN:
        raise AssertionError("largest minimum exceeds deltaN despite lambda0 > delta0")
    # columns of A are the witness coefficient vectors
    A = [[sm.witnesses[j][i] for j in range(n + 1)] for i in range(n + 1)]
    p = bertrand_prime(constants.cPrime)
    upper = 2 * constants.cPrime if constants.cPrime >= 2 else None
    while det(A) % p == 0:
        p = next_prime(p)
        if upper is not None and p >= upper:
            raise TailoringError("bad prime", "det A vanishes modulo every prime in (c', 2c')")
    polys, etas = twisted_polynomials(A, p)
    certs = [certify(P, f, psi, phi, constants, p) for P in polys]
    independent = rank([list(P.coeffs) + [0] * (n + 1 - len(P.coeffs)) for P in polys]) == n + 1
    result = TailoredResult(polys, certs, constants, p, sm.minima, independent, psi, phi)
    for c in certs:
        if not c.eisenstein:
            raise TailoringError("eisenstein", f"twist failed at p={p}")
        if not c.bounds_hold:
            raise TailoringError("bound violated", str(c.polynomial))
    if not independent:
        raise TailoringError("independence", "twisted polynomials are dependent")
    return result


# -- conjugate points ------------------------------------------------------------

@dataclass(frozen=True)
class Bracket:
    status: str  # "ok" | "no sign change"
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    def contains(self, x) -> bool:
        return self.status == "ok" and self.lo <= x <= self.hi


def conjugate_points_from_polynomial(P: IntegerPolynomial, targets: Sequence, radii: Sequence,
                                     precision: int = 40) -> List[Bracket]:
    """Bisect ``[y_k - r_k, y_k + r_k]`` to width ``2^-precision * r_k`` on a sign change.

    Signs are exact. The intervals are checked for pairwise disjointness.
    """
    ys = [Fraction(y) for y in targets]
    rs = [Fraction(r) for r in radii]
    if len(ys) != len(rs) or any(r <= 0 for r in rs):
        raise ValueError("one positive radius per target")
    spans = sorted((y - r, y + r) for y, r in zip(ys, rs))
    if any(a[1] >= b[0] for a, b in zip(spans, spans[1:])):
        raise ValueError("target intervals overlap")
    out = []
    for y, r in zip(ys, rs):
        lo, hi = y - r, y + r
        slo, shi = P.sign_at(lo), P.sign_at(hi)
        if slo == 0:
            out.append(Bracket("ok", lo, lo))
            continue
        if shi == 0:
            out.append(Bracket("ok", hi, hi))
            continue
        if slo == shi:
            out.append(Bracket("no sign change"))
            continue
        width = r / 2 ** precision
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = P.sign_at(mid)
            if s == 0:
                lo = hi = mid
                break
            if s == slo:
                lo = mid
            else:
                hi = mid
        out.append(Bracket("ok", lo, hi))
    return out
