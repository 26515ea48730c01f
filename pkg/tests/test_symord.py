from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conjpoints.polynomial import SparsePolynomial, parse_polynomial
from conjpoints.symord import (INFINITE, PolynomialMap, check_nonsymmetric_degree,
                               generalized_wronskian, symmetric_relation, symord_linear_oracle,
                               symord_lower_bound_pair, symord_upper_bound,
                               symord_via_elimination, wronskian_nondegenerate)


def pm(*texts, names=("x",)):
    return PolynomialMap(tuple(parse_polynomial(t, names) for t in texts))


def veronese(tau):
    return PolynomialMap(tuple(SparsePolynomial.monomial((k,)) for k in range(1, tau + 1)))


@pytest.mark.parametrize("tau,want", [(2, 4), (3, 5), (4, 5)])
def test_veronese_table(tau, want):
    assert symord_via_elimination(veronese(tau)).value == want


def test_independent_coordinates():
    assert symord_via_elimination(pm("x", "y", names=("x", "y"))).value == INFINITE


def test_witness_gives_a_symmetric_relation():
    res = symord_via_elimination(veronese(2))
    rel = symmetric_relation(res.witness, 1, 2)
    assert rel.is_symmetric() and not rel.is_zero()
    assert rel.total_degree() == 4
    assert rel.compose(list(veronese(2).components)).is_zero()


def test_generalized_wronskian_examples():
    one, x = SparsePolynomial.constant(1, 1), SparsePolynomial.variable(1, 0)
    assert generalized_wronskian([one, x, x * x], [(0,), (1,), (2,)]) == SparsePolynomial.constant(1, 2)
    assert generalized_wronskian([one, x], [(0,), (0,)]).is_zero()
    assert generalized_wronskian([x, x], [(0,), (1,)]).is_zero()


def test_wronskian_nondegenerate_examples():
    x = SparsePolynomial.variable(1, 0)
    ok, ops = wronskian_nondegenerate([SparsePolynomial.constant(1, 1), x, x * x])
    assert ok and [tuple(o) for o in ops] == [(0,), (1,), (2,)]
    assert wronskian_nondegenerate([x, x * 2]) == (False, None)
    u, v = SparsePolynomial.variable(2, 0), SparsePolynomial.variable(2, 1)
    assert wronskian_nondegenerate([SparsePolynomial.constant(2, 1), u, v])[0]


def test_nonsymmetric_degree_examples():
    p = pm("x", "x^2")
    assert check_nonsymmetric_degree(p, 3)
    assert not check_nonsymmetric_degree(p, 4)
    assert check_nonsymmetric_degree(pm("x"), 6)


def test_lower_bound_pair():
    assert symord_lower_bound_pair(SparsePolynomial.monomial((6,)), SparsePolynomial.monomial((2,))) == 3
    assert symord_lower_bound_pair(SparsePolynomial.monomial((2,)), SparsePolynomial.monomial((1,))) == 2
    p = pm("x^2", "x")
    assert symord_via_elimination(p).value >= symord_lower_bound_pair(*p.components)


def test_upper_bound():
    p = veronese(3)
    assert symord_upper_bound(p, (0, 1)) == 15
    assert symord_via_elimination(p).value <= 15
    assert symord_upper_bound(p, (0, 1, 2)) == 6


_univariate = st.lists(st.integers(-2, 2), min_size=2, max_size=4).filter(lambda c: any(c[1:]))


@settings(max_examples=15)
@given(_univariate, _univariate)
def test_elimination_matches_linear_oracle(c0, c1):
    p = PolynomialMap((SparsePolynomial.univariate(c0), SparsePolynomial.univariate(c1)))
    v = symord_via_elimination(p).value
    o = symord_linear_oracle(p, 5)
    if v != INFINITE and v <= 5:
        assert o == v
    else:
        assert o == INFINITE


def test_time_budget_interrupts_long_reductions():
    import time
    from conjpoints.groebner import BudgetExceeded
    x = SparsePolynomial.variable(1, 0)
    veronese5 = PolynomialMap(tuple(x ** k for k in range(1, 6)))
    t = time.monotonic()
    with pytest.raises(BudgetExceeded):
        symord_via_elimination(veronese5, max_seconds=2)
    assert time.monotonic() - t < 60
