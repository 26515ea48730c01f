from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conjpoints.counting import (Chart, count_near_manifold, enumerate_algebraic_points,
                                 fit_exponent, threshold_bounds)
from conjpoints.oracles import count_quadratic_oracle
from conjpoints.polynomial import SparsePolynomial

F = Fraction
CHART = Chart(1, (SparsePolynomial.univariate([2, 0, 1]),))
UNIT = [(F(0), F(1))]


def test_height_one_linear_points():
    pts = list(enumerate_algebraic_points(1, 0, 1))
    roots = sorted((p.coordinates[0].refine(F(1, 2 ** 20)) for p in pts), key=lambda r: r.lo)
    assert [round(r.approx()) for r in roots] == [-1, 0, 1]
    assert all(r.lo <= round(r.approx()) <= r.hi for r in roots)


def test_linear_polynomials_cannot_fill_two_coordinates():
    assert list(enumerate_algebraic_points(1, 1, 5)) == []


def test_quadratic_points_are_conjugate_pairs():
    for p in enumerate_algebraic_points(2, 1, 2):
        a, b = (c.refine(F(1, 2 ** 30)).approx() for c in p.coordinates)
        P = p.minimal_polynomial
        assert abs(a - b) > 0
        assert P.degree == 2 and p.height <= 2


def test_degenerate_inputs_count_zero():
    assert count_near_manifold(CHART, 2, 8, F(1, 2), 0, UNIT).count == 0
    assert count_near_manifold(CHART, 2, 8, F(1, 2), 4, [(F(1), F(1))]).count == 0


def test_golden_q16():
    # value confirmed by the decimal double-loop oracle
    fast = count_near_manifold(CHART, 2, 16, F(1, 2), 4, UNIT, method="fast")
    exact = count_near_manifold(CHART, 2, 16, F(1, 2), 4, UNIT, method="exact", keep_samples=True)
    assert fast.count == exact.count == 229
    assert fast.undecidable == exact.undecidable == 0


def test_q3_matches_oracle():
    want = count_quadratic_oracle([2, 0, 1], 3, F(1, 2), 4, (0, 1))
    assert count_near_manifold(CHART, 2, 3, F(1, 2), 4, UNIT, method="exact").count == want


@settings(max_examples=25)
@given(st.integers(1, 6), st.sampled_from([F(1, 4), F(1, 2), F(1), F(3, 2)]),
       st.sampled_from([F(1), F(4), F(16)]),
       st.lists(st.integers(-2, 2), min_size=2, max_size=3))
def test_fast_exact_oracle_agree(Q, gamma, c, cs):
    chart = Chart(1, (SparsePolynomial.univariate(cs),))
    want = count_quadratic_oracle(cs, Q, gamma, c, (F(-1), F(2)))
    J = [(F(-1), F(2))]
    assert count_near_manifold(chart, 2, Q, gamma, c, J, method="fast").count == want
    assert count_near_manifold(chart, 2, Q, gamma, c, J, method="exact").count == want


def test_parallel_shards_match():
    a = count_near_manifold(CHART, 2, 24, F(1, 2), 4, UNIT, method="fast", jobs=1)
    b = count_near_manifold(CHART, 2, 24, F(1, 2), 4, UNIT, method="fast", jobs=2)
    assert a.count == b.count


def test_fast_path_rejects_other_shapes():
    with pytest.raises(ValueError):
        count_near_manifold(CHART, 3, 4, F(1, 2), 4, UNIT, method="fast")


def test_threshold_bounds_bracket_irrational():
    lo, hi = threshold_bounds(4, 7, F(1, 2))
    assert lo <= hi and lo * lo * 7 <= 16 <= hi * hi * 7
    assert threshold_bounds(4, 16, F(1, 2)) == (1, 1)


def test_fit_exponent_examples():
    k = 3.0
    slope, _, rms = fit_exponent([(q, q ** 2.5 * k) for q in (2, 4, 8)])
    assert slope == pytest.approx(2.5, abs=1e-9) and rms < 1e-9
    assert fit_exponent([(2, 5), (4, 5), (8, 5)])[0] == pytest.approx(0, abs=1e-12)


def test_small_slope_sweep():
    pts = [(Q, count_near_manifold(CHART, 2, Q, F(1, 2), 4, UNIT).count) for Q in (16, 32, 64)]
    slope, _, _ = fit_exponent(pts)
    assert abs(slope - 2.5) <= 0.35


def test_exact_ties_are_decided():
    # f(r) - s = 1 + a1/a2 is rational and can sit exactly on the threshold
    chart = Chart(1, (SparsePolynomial.univariate([1, -1]),))
    J = [(F(-1), F(2))]
    for method in ("fast", "exact"):
        r = count_near_manifold(chart, 2, 2, F(1), F(1), J, method=method)
        assert r.undecidable == 0 and r.count == 4
