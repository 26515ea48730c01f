import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjpoints.goodness import default_epsilons, goodness_bound_check, random_polynomial_map
from conjpoints.polynomial import SparsePolynomial


def test_identity_map():
    rep = goodness_bound_check([SparsePolynomial.variable(1, 0)], [(0.0, 1.0)], [0.25])
    (row,) = rep.rows
    assert row.measure == pytest.approx(0.25)
    assert row.bound == pytest.approx(1.0, rel=1 / 512)  # norm is the grid maximum
    assert not row.violation


def test_constant_map():
    rep = goodness_bound_check([SparsePolynomial.constant(1, 1)], [(0.0, 1.0)], [0.5])
    assert rep.rows[0].measure == 0 and rep.violations == 0


def test_grid_shape():
    eps = default_epsilons(2.0)
    assert len(eps) == 8 and eps[0] == 0.5 and eps[-1] == pytest.approx(2 * 4.0 ** -8)


def test_zero_map_rejected():
    with pytest.raises(ValueError):
        goodness_bound_check([SparsePolynomial.zero(1)], [(0.0, 1.0)])


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_maps_respect_bound(seed):
    rng = np.random.Generator(np.random.Philox(key=seed))
    d = int(rng.integers(1, 3))
    g = random_polynomial_map(rng, d, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    assert goodness_bound_check(g, [(0.0, 1.0)] * d, resolution=256).violations == 0


def test_measure_converges_for_square():
    # |{x in [0,1] : x^2 < eps}| = sqrt(eps)
    x = SparsePolynomial.variable(1, 0)
    rep = goodness_bound_check([x * x], [(0.0, 1.0)], [0.09], resolution=4096)
    assert rep.rows[0].measure == pytest.approx(0.3, abs=1e-3)
