"""Integer polynomials in one variable: exact sign evaluation, Sturm sequences,
certified real root isolation and exact irreducibility for small degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class IntegerPolynomial:
    """``a_0 + a_1 X + ... + a_n X^n`` with integer coefficients (low degree first)."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @classmethod
    def from_high(cls, *coeffs: int) -> "IntegerPolynomial":
        """Build from coefficients listed leading-first: ``from_high(1, 0, -2)`` is ``X^2 - 2``."""
        return cls(tuple(reversed(coeffs)))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def height(self) -> int:
        return max(abs(a) for a in self.coeffs)

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def primitive(self) -> "IntegerPolynomial":
        g = self.content()
        if g == 0:
            return self
        if self.leading < 0:
            g = -g
        return IntegerPolynomial(tuple(a // g for a in self.coeffs))

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial(tuple(k * a for k, a in enumerate(self.coeffs))[1:] or (0,))

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of the value at a rational point, using integer arithmetic only."""
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        acc = 0
        qk = 1
        # sum a_k p^k q^(n-k), evaluated by Horner in p with q powers
        for a in reversed(self.coeffs):
            acc = acc * p + a * qk
            qk *= q
        return (acc > 0) - (acc < 0)

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            mag = abs(a)
            body = (str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}"))
            terms.append(("-" if a < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out


# -- dense rational polynomial helpers (coefficient lists, low degree first) --

def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial remainder by zero")
    lb = b[-1]
    while len(a) >= len(b):
        f = a[-1] / lb
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        _trim(a)
    return a


def _poly_divexact(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        _trim(a)
    if a:
        raise ArithmeticError("inexact polynomial division")
    return q


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        a, b = b, _poly_rem(a, b)
    return [c / a[-1] for c in a] if a else a


def _to_integer(p: Sequence[Fraction]) -> IntegerPolynomial:
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (Fraction(c).denominator for c in p), 1)
    return IntegerPolynomial(tuple(int(c * den) for c in p)).primitive()


def squarefree_part(P: IntegerPolynomial) -> IntegerPolynomial:
    if P.degree <= 0:
        return P
    g = _poly_gcd(P.coeffs, P.derivative().coeffs)
    if len(g) <= 1:
        return P.primitive()
    return _to_integer(_poly_divexact(P.coeffs, g))


def sturm_sequence(P: IntegerPolynomial) -> List[List[Fraction]]:
    """Sturm sequence ``P, P', -rem(...)...`` of the square-free part of ``P``."""
    f = squarefree_part(P)
    seq = [[Fraction(c) for c in f.coeffs], [Fraction(c) for c in f.derivative().coeffs]]
    while True:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return _trim_seq(seq)


def _trim_seq(seq):
    return [s for s in seq if s]


def _sign(p: Sequence[Fraction], x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def sign_variations(seq: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = [s for s in (_sign(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in ``(lo, hi]``."""
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def cauchy_bound(P: IntegerPolynomial) -> Fraction:
    lead = abs(P.leading)
    return 1 + Fraction(max(abs(a) for a in P.coeffs[:-1]), lead) if P.degree > 0 else Fraction(1)


@dataclass(frozen=True)
class RootEnclosure:
    """Closed rational interval holding exactly one real root of ``poly``.

    ``lo == hi`` means the root is the rational number ``lo``. Otherwise the
    endpoints are not roots and the square-free part changes sign across them.
    """

    lo: Fraction
    hi: Fraction
    poly: IntegerPolynomial

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self, width: Fraction) -> "RootEnclosure":
        """Bisect until the interval is no wider than ``width``."""
        if self.is_exact() or self.width <= width:
            return self
        f = squarefree_part(self.poly)
        lo, hi = self.lo, self.hi
        slo = f.sign_at(lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = f.sign_at(mid)
            if s == 0:
                return RootEnclosure(mid, mid, self.poly)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return RootEnclosure(lo, hi, self.poly)

    def approx(self) -> float:
        return float(self.midpoint())


def _split_point(seq, lo: Fraction, hi: Fraction, f: IntegerPolynomial) -> Fraction:
    # a point strictly inside (lo, hi) that is not a root, preferring the midpoint
    mid = (lo + hi) / 2
    step = (hi - lo) / 8
    k = 0
    cand = mid
    while f.sign_at(cand) == 0:
        k += 1
        cand = mid + step / k if k % 2 else mid - step / k
    return cand


def sturm_isolate(P: IntegerPolynomial) -> List[RootEnclosure]:
    """Disjoint isolating intervals for the distinct real roots of ``P``, ascending."""
    if P.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    f = squarefree_part(P)
    if f.degree < 1:
        return []
    seq = sturm_sequence(f)
    B = cauchy_bound(f)
    lo, hi = -B, B
    # Cauchy's bound is strict, so neither endpoint is a root
    out: List[RootEnclosure] = []
    stack = [(lo, hi, count_roots(seq, lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(RootEnclosure(a, b, P))
            continue
        mid = _split_point(seq, a, b, f)
        stack.append((mid, b, count_roots(seq, mid, b)))
        stack.append((a, mid, count_roots(seq, a, mid)))
    out.sort(key=lambda r: r.lo)
    # neighbours may share a split point; shrink until the closed intervals are disjoint
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i].hi >= out[i + 1].lo:
                out[i] = out[i].refine(out[i].width / 2)
                out[i + 1] = out[i + 1].refine(out[i + 1].width / 2)
                changed = True
    return out


def real_root_count(P: IntegerPolynomial) -> int:
    f = squarefree_part(P)
    if f.degree < 1:
        return 0
    B = cauchy_bound(f)
    return count_roots(sturm_sequence(f), -B, B)


def isolates(enc: RootEnclosure) -> bool:
    """Replay check: the enclosure holds exactly one root of its polynomial."""
    f = squarefree_part(enc.poly)
    if enc.is_exact():
        return f.sign_at(enc.lo) == 0
    if f.sign_at(enc.lo) == 0 or f.sign_at(enc.hi) == 0:
        return False
    return count_roots(sturm_sequence(f), enc.lo, enc.hi) == 1


# -- irreducibility --------------------------------------------------------

MAX_IRREDUCIBLE_DEGREE = 5


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        raise ValueError("zero has no finite divisor list")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(P: IntegerPolynomial) -> List[Fraction]:
    """All rational roots, by the rational root theorem."""
    coeffs = list(P.coeffs)
    roots = []
    if coeffs[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, a in enumerate(coeffs) if a)
        coeffs = coeffs[k:]
    if len(coeffs) == 1:
        return roots
    Q = IntegerPolynomial(tuple(coeffs))
    for p in _divisors(coeffs[0]):
        for q in _divisors(coeffs[-1]):
            if math.gcd(p, q) != 1:
                continue
            for s in (1, -1):
                r = Fraction(s * p, q)
                if Q.sign_at(r) == 0:
                    roots.append(r)
    return sorted(set(roots))


def mignotte_bound(P: IntegerPolynomial, k: int, j: int) -> int:
    """Bound on ``|b_j|`` for any integer factor of degree ``k``."""
    norm2 = math.isqrt(sum(a * a for a in P.coeffs)) + 1
    return math.comb(k, j) * norm2


def _has_quadratic_factor(P: IntegerPolynomial) -> bool:
    # Kronecker: a factor g divides P(1) and P(-1) at those points; both are
    # nonzero once rational roots are excluded.
    a0, an = P.coeffs[0], P.leading
    v1, vm1 = P(1), P(-1)
    bound = mignotte_bound(P, 2, 1)
    d1 = _divisors(v1)
    dm1 = set(_divisors(vm1))
    for b2 in _divisors(an):
        for b0 in _divisors(a0):
            for s0 in (1, -1):
                c0 = s0 * b0
                for d in d1:
                    for s in (1, -1):
                        b1 = s * d - b2 - c0
                        if abs(b1) > bound:
                            continue
                        if abs(b2 - b1 + c0) not in dm1:
                            continue
                        g = [Fraction(c0), Fraction(b1), Fraction(b2)]
                        if not _poly_rem(P.coeffs, g):
                            return True
    return False


def is_irreducible(P: IntegerPolynomial) -> bool:
    """Exact irreducibility over Q for ``1 <= deg P <= 5``.

    Rational roots come from divisor lists found by trial division, so this is
    meant for the small heights met while counting.
    """
    n = P.degree
    if n < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    if n > MAX_IRREDUCIBLE_DEGREE:
        raise NotImplementedError(f"exact irreducibility supports degree <= {MAX_IRREDUCIBLE_DEGREE}")
    if n == 1:
        return True
    if rational_roots(P):
        return False
    if n <= 3:
        return True
    return not _has_quadratic_factor(P)


def is_eisenstein(P: IntegerPolynomial, p: int) -> bool:
    """Eisenstein's criterion at the prime ``p``."""
    if P.is_zero() or P.leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    if P.degree < 1:
        return False
    a = P.coeffs
    return (a[-1] % p != 0 and all(c % p == 0 for c in a[:-1]) and a[0] % (p * p) != 0)
