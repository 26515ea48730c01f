from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conjpoints.lattice import ApproximationProfile, PowerLaw
from conjpoints.linalg import det, rank
from conjpoints.oracles import successive_minima_bruteforce
from conjpoints.tailored import (TailoredConstants, TailoringError, bertrand_prime,
                                 conjugate_points_from_polynomial, construct_tailored,
                                 eisenstein_twist, is_prime, minkowski_solutions,
                                 twisted_polynomials, replay)
from conjpoints.univariate import IntegerPolynomial, is_eisenstein, is_irreducible

F = Fraction


def original_profile(eps=F(1)):
    inv = PowerLaw(F(1), F(-1))
    return ApproximationProfile(3, 1, 1, (inv, inv), (PowerLaw(eps ** 4, F(1)), PowerLaw(F(1), F(1))))


def test_bertrand_prime_examples():
    assert bertrand_prime(10) == 11
    assert bertrand_prime(100) == 101
    assert bertrand_prime(1) == 2  # (1, 2) holds no prime; widened to the next prime


@given(st.fractions(min_value=2, max_value=5000, max_denominator=7))
def test_bertrand_interval(c):
    p = bertrand_prime(c)
    assert is_prime(p) and c < p < 2 * c


def test_is_prime_against_sieve():
    N = 2000
    sieve = [True] * N
    sieve[0] = sieve[1] = False
    for i in range(2, N):
        if sieve[i]:
            for j in range(i * i, N, i):
                sieve[j] = False
    assert [i for i in range(N) if is_prime(i)] == [i for i in range(N) if sieve[i]]


def test_twist_identity_pinned():
    # t = b and s_l = b + 2 r_l, so every constant term is 2
    etas = eisenstein_twist([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 2)
    assert etas == [[2, 0, 1], [2, 2, 1], [2, 0, 3]]


@settings(max_examples=40)
@given(st.integers(1, 3).flatmap(lambda k: st.lists(st.lists(st.integers(-4, 4), min_size=k + 1,
                                                             max_size=k + 1), min_size=k + 1, max_size=k + 1)),
       st.sampled_from([3, 5, 7, 11]))
def test_twist_properties(A, p):
    # p = 2 admits only one unit residue, so independence is not forced there
    if det(A) % p == 0:
        return
    polys, etas = twisted_polynomials(A, p)
    for P in polys:
        assert is_eisenstein(P, p)
        if P.degree <= 5:
            assert is_irreducible(P)
    # every eta is t mod p, so independence has to be checked over Q
    coeffs = [list(P.coeffs) + [0] * (len(A) - len(P.coeffs)) for P in polys]
    assert rank(coeffs) == len(A)


def test_rational_point_with_small_denominator_fails_early():
    # 8X^2 - 22X + 9 vanishes at 1/2 and 9/4, so lambda_0 = 8/1000
    x = F(1, 2)
    with pytest.raises(TailoringError) as exc:
        construct_tailored([x, x * x + 2], original_profile(), 1000, F(1, 4), F(1, 100))
    assert exc.value.stage == "lambda0 below delta0"


def test_construct_tailored_pinned_point():
    x = F(5003, 10007)
    f = [x, x * x + 2]
    res = construct_tailored(f, original_profile(), 1000, F(1, 4), F(1, 100))
    assert res.ok and len(res.polynomials) == 4
    coeffs = [list(P.coeffs) + [0] * (4 - len(P.coeffs)) for P in res.polynomials]
    assert rank(coeffs) == 4
    for c in res.certificates:
        assert replay(c, f, res.psi, res.phi, res.constants)
        assert c.polynomial.height() <= res.constants.cY * res.phi[0]
    X = sympy.Symbol("X")
    for P in res.polynomials:
        assert is_eisenstein(P, res.prime)
        assert sympy.Poly([int(c) for c in reversed(P.coeffs)], X).is_irreducible


def test_certificate_tamper_detected():
    x = F(5003, 10007)
    f = [x, x * x + 2]
    res = construct_tailored(f, original_profile(), 1000, F(1, 4), F(1, 100))
    cert = res.certificates[0]
    assert not replay(cert, [x + F(1, 7), f[1]], res.psi, res.phi, res.constants)


def test_profile_rule_enforced():
    bad = ApproximationProfile(3, 1, 1, (PowerLaw(F(1), F(-1)),) * 2,
                               (PowerLaw(F(1, 2), F(1)), PowerLaw(F(1), F(1))))
    with pytest.raises(TailoringError) as exc:
        construct_tailored([F(1, 2), F(9, 4)], bad, 1000, F(1, 4), F(1, 100))
    assert exc.value.stage == "profile"


def test_constants_formulae():
    c = TailoredConstants.derive(3, F(2), F(1, 4), F(1), F(1), F(1, 100))
    assert c.deltaN == 2 * 64
    assert c.cPrime == 16 * c.deltaN ** 4
    assert c.cY == 16 * c.deltaN * c.cPrime ** 2


@pytest.mark.parametrize("x,Q", [(F(1, 5), 2), (F(1, 2), 3), (F(3, 4), 2), (F(2, 7), 2)])
def test_minkowski_solutions_match_bruteforce(x, Q):
    inv = PowerLaw(F(1), F(-1))
    prof = ApproximationProfile(2, 1, 1, (inv, inv), (PowerLaw(F(1), F(1)),))
    f = [x, x * x + 2]
    M, body, sm = minkowski_solutions(f, prof, Q)
    ref = successive_minima_bruteforce(M, body.half_widths)
    assert ref is not None
    assert list(sm.minima) == ref
    assert abs(det([[sm.witnesses[j][i] for j in range(3)] for i in range(3)])) >= 1


def test_trivial_profile_uses_unit_vectors():
    big = PowerLaw(F(8), F(0))
    prof = ApproximationProfile(2, 1, 1, (big, big), (big,))
    _, _, sm = minkowski_solutions([F(1, 2), F(1, 3)], prof, 1)
    assert all(l <= 1 for l in sm.minima)


def test_conjugate_points_examples():
    (b,) = conjugate_points_from_polynomial(IntegerPolynomial.from_high(1, 0, -2), [F(14, 10)], [F(1, 10)], 12)
    assert b.status == "ok" and b.lo ** 2 <= 2 <= b.hi ** 2
    assert b.hi - b.lo <= F(1, 10) / 2 ** 12
    (b,) = conjugate_points_from_polynomial(IntegerPolynomial.from_high(1, 0, 1), [F(0)], [F(5)])
    assert b.status == "no sign change"
    (b,) = conjugate_points_from_polynomial(IntegerPolynomial.from_high(1, 0), [F(1, 100)], [F(1, 10)])
    assert b.contains(0)


def test_conjugate_points_reject_overlap():
    with pytest.raises(ValueError):
        conjugate_points_from_polynomial(IntegerPolynomial.from_high(1, 0, -2), [F(1), F(11, 10)], [F(1, 5), F(1, 5)])
