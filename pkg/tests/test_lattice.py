import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conjpoints.lattice import (ApproximationProfile, ConvexBody, PowerLaw, SingularSystem,
                                bad_set_indicator, build_M, build_U, frame_components, grass,
                                measure_estimate, minkowski_sandwich, scaling_parameters,
                                schur_factorization_check, shortest_vector, successive_minima,
                                vandermonde, wedge_transform)
from conjpoints.linalg import det, det_cofactor, matmul, minor
from conjpoints.oracles import svp_bruteforce

F = Fraction


def test_build_M_examples():
    assert build_M(2, [0, 1]) == [[1, 0, 0], [1, 1, 1], [0, 0, 1]]
    assert det(build_M(2, [0, 1])) == 1
    assert det(build_M(2, [0, 0])) == 0
    M = build_M(3, [1, 2])
    assert det(M) == det_cofactor(M)


def test_build_U_examples():
    U0 = build_U(2, 0, [0, 1])
    assert U0 == [[1, 0, 0], [1, 1, 1], [0, 1, 0]] and det(U0) == -1
    U1 = build_U(2, 1, [0, 1])
    assert U1 == [[1, 0, 0], [1, 1, 1], [0, 1, 2]] and det(U1) == 1
    with pytest.raises(ValueError):
        build_U(2, 2, [0, 1])


def test_vandermonde_examples():
    assert vandermonde([1, 2, 3]) == 2
    assert vandermonde([F(1, 3), F(1, 3)]) == 0
    assert vandermonde([5]) == 1


def test_grass_examples():
    assert grass([[1, 0], [0, 1]], (0, 1)) == {(0, 1): 1}
    assert grass([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (0, 1)) == {(0, 1): 1, (0, 2): 0, (1, 2): 0}
    g = grass(build_M(2, [0, 1]), (0, 1))
    assert [g[J] for J in sorted(g)] == [1, 1, 0]
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert grass(A, (0, 1, 2)) == {(0, 1, 2): det(A)}


ints = st.integers(-3, 3)


@settings(max_examples=30)
@given(st.lists(st.lists(ints, min_size=4, max_size=4), min_size=4, max_size=4),
       st.lists(st.lists(ints, min_size=2, max_size=2), min_size=4, max_size=4),
       st.sampled_from(list(combinations(range(4), 2))))
def test_wedge_transform_is_cauchy_binet(A, W, I):
    # e_I component of (A W) equals the minor of the product
    want = minor(matmul(A, W), I, (0, 1))
    assert wedge_transform(A, frame_components(W), I) == want


def test_wedge_transform_passthrough():
    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    W = [[1, 2], [0, 1], [3, 1]]
    for I in combinations(range(3), 2):
        assert wedge_transform(ident, frame_components(W), I) == minor(W, I, (0, 1))


def test_factorization_examples():
    assert schur_factorization_check(2, [0, 1], (0, 1))
    assert schur_factorization_check(3, [F(1, 2), F(-2, 3), F(4)], (0, 2))
    assert schur_factorization_check(3, [1, 1, 2], (0, 1))


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=6), min_size=2, max_size=2, unique=True))
def test_factorization_property(fvals):
    assert schur_factorization_check(3, fvals, (0, 1))


def test_scaling_examples():
    eps, Q = F(1, 2), 10 ** 6
    inv = PowerLaw(F(1), F(-1))
    prof = ApproximationProfile(3, 1, 1, (inv, inv), (PowerLaw(eps ** 4, F(1)), PowerLaw(F(1), F(1))))
    sp = scaling_parameters(prof, Q)
    assert sp.delta == pytest.approx(float(eps))
    assert sp.t[0] == pytest.approx(math.log(eps) + math.log(Q))
    sp.check(prof, Q)
    one = PowerLaw(F(1), F(0))
    sp = scaling_parameters(ApproximationProfile(2, 1, 1, (one, one), (one,)), 7)
    assert sp.delta == 1 and sp.t == (0, 0, 0)
    sp = scaling_parameters(ApproximationProfile(1, 0, 1, (inv,), (PowerLaw(F(1), F(1)),)), 50)
    assert sp.delta == pytest.approx(1) and sp.t == pytest.approx((math.log(50), math.log(50)))


def test_shortest_vector_examples():
    sv = shortest_vector([[2, 0], [0, 3]], 10)
    assert sv.coeffs == (1, 0) and sv.vector == (2, 0) and sv.norm == 2
    assert shortest_vector([[1, 0], [0, 1]], F(1, 2)) is None


def _unimodular(rng, k):
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(6):
        i, j = rng.choice(k, 2, replace=False)
        c = int(rng.integers(-2, 3))
        for r in range(k):
            U[r][i] += c * U[r][j]
    return U


def test_unimodular_lattices_have_unit_minimum():
    rng = np.random.default_rng(3)
    for _ in range(20):
        assert shortest_vector(_unimodular(rng, 3), 5).norm == 1


@settings(max_examples=40)
@given(st.integers(1, 3).flatmap(lambda k: st.lists(st.lists(ints, min_size=k, max_size=k),
                                                     min_size=k, max_size=k)))
def test_shortest_vector_matches_bruteforce(B):
    if det(B) == 0:
        return
    ref = svp_bruteforce(B)
    if ref is None:
        return
    z, norm = ref
    sv = shortest_vector(B, norm + 1)
    assert (sv.coeffs, sv.norm) == (z, norm)


def test_successive_minima_examples():
    cube = ConvexBody((F(1), F(1)))
    assert successive_minima([[1, 0], [0, 1]], cube).minima == (1, 1)
    assert successive_minima([[1, 0], [0, 4]], cube).minima == (1, 4)


@settings(max_examples=40)
@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(1, 12), min_size=3, max_size=3))
def test_minkowski_sandwich_property(B, hw):
    if det(B) == 0:
        return
    body = ConvexBody(tuple(F(h, 3) for h in hw))
    sm = successive_minima(B, body)
    assert list(sm.minima) == sorted(sm.minima)
    assert minkowski_sandwich(B, body, sm.minima)
    assert det([[sm.witnesses[j][i] for j in range(3)] for i in range(3)]) != 0


def _profile(psi, phi, n=2, m=1):
    return ApproximationProfile(n, m, 1, tuple(PowerLaw(F(v), F(0)) for v in psi),
                                tuple(PowerLaw(F(v), F(0)) for v in phi))


def test_bad_set_constant_solution():
    f = [F(1, 3), F(1, 2)]
    big = 2 * (1 + sum(abs(x) ** 2 for x in f))
    assert bad_set_indicator(f, _profile([big, big], [2]), 1)


def test_bad_set_tiny_box_is_empty():
    assert not bad_set_indicator([F(1, 3), F(1, 2)], _profile([F(1, 1000)] * 2, [F(1, 1000)]), 1)


def _brute_bad(f, psi, phi):
    # n = 2, m = 1: (P(f0), P(f1), P'(f0)) determines a, which bounds a1, a2;
    # a0 is then read off from |P(f0)| < psi0
    x0, x1 = f
    R0, R1 = sympy.Rational(str(x0)), sympy.Rational(str(x1))
    L = sympy.Matrix([[1, R0, R0 ** 2], [1, R1, R1 ** 2], [0, 1, 2 * R0]])
    Linv = L.inv()
    caps = [psi[0], psi[1], phi[0]]
    H = [math.floor(sum(abs(F(str(Linv[k, j]))) * caps[j] for j in range(3))) for k in range(3)]
    for a2 in range(-H[2], H[2] + 1):
        for a1 in range(-H[1], H[1] + 1):
            rest = a1 * x0 + a2 * x0 ** 2
            lo, hi = math.floor(-psi[0] - rest) + 1, math.ceil(psi[0] - rest) - 1
            for a0 in range(lo, hi + 1):
                a = (a0, a1, a2)
                if not any(a):
                    continue
                if all(abs(a0 + a1 * x + a2 * x * x) < p for x, p in zip(f, psi)) and \
                        all(abs(a1 + 2 * a2 * x) <= phi[0] for x in f):
                    return True
    return False


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=5), min_size=2, max_size=2, unique=True),
       st.lists(st.fractions(min_value=F(1, 20), max_value=2, max_denominator=20), min_size=2, max_size=2),
       st.integers(1, 5))
def test_bad_set_matches_double_loop(f, psi, phi):
    prof = _profile(psi, [phi])
    try:
        got = bad_set_indicator(f, prof, 1)
    except SingularSystem:
        return
    assert got == _brute_bad(f, psi, [phi])


def test_measure_extremes():
    chart = lambda x: [x[0], x[0] * x[0] + 2]
    assert measure_estimate([(0.1, 0.9)], chart, _profile([100, 100], [100]), 1, 30, 1) == 1
    tiny = _profile([F(1, 10 ** 6)] * 2, [F(1, 10 ** 6)])
    assert measure_estimate([(0.1, 0.9)], chart, tiny, 1, 30, 1) == 0


def test_measure_is_seeded():
    chart = lambda x: [x[0], x[0] * x[0] + 2]
    inv = PowerLaw(F(1), F(-1))
    prof = ApproximationProfile(3, 1, 1, (inv, inv), (PowerLaw(F(1, 16), F(1)), PowerLaw(F(1), F(1))))
    a = measure_estimate([(0.0, 1.0)], chart, prof, 100, 40, 5)
    assert a == measure_estimate([(0.0, 1.0)], chart, prof, 100, 40, 5)


def test_bad_set_needs_large_coefficients():
    # 3x^2 - 7x + 4 vanishes at 1 and 4/3 with |P'| = 1 there
    f, psi = [F(1), F(4, 3)], [F(1, 20)] * 2
    assert bad_set_indicator(f, _profile(psi, [1]), 1)
    assert _brute_bad(f, psi, [1])
