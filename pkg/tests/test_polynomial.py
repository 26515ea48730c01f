from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conjpoints.polynomial import SparsePolynomial, parse_polynomial

small = st.integers(-4, 4)
exps2 = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, arity=2):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 3)] * arity),
                                 st.fractions(min_value=-5, max_value=5, max_denominator=4),
                                 max_size=5))
    return SparsePolynomial(arity, terms)


def to_sympy(p, names=("a", "b")):
    syms = sympy.symbols(names[:p.arity])
    return sympy.expand(sum((sympy.Rational(c.numerator, c.denominator)
                             * sympy.Mul(*[s ** e for s, e in zip(syms, exp)])
                             for exp, c in p.items()), sympy.Integer(0)))


@given(polys(), polys())
def test_ring_ops_match_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))


@given(polys(), st.tuples(st.fractions(max_denominator=7, min_value=-3, max_value=3),
                          st.fractions(max_denominator=7, min_value=-3, max_value=3)))
def test_rational_evaluation_is_exact(p, pt):
    a, b = sympy.symbols("a b")
    want = to_sympy(p).subs({a: sympy.Rational(pt[0].numerator, pt[0].denominator),
                             b: sympy.Rational(pt[1].numerator, pt[1].denominator)})
    got = p.evaluate(list(pt))
    assert isinstance(got, Fraction)
    assert sympy.Rational(got.numerator, got.denominator) == want


@given(polys())
def test_derivative_matches_sympy(p):
    a, _ = sympy.symbols("a b")
    assert to_sympy(p.diff(0)) == sympy.expand(sympy.diff(to_sympy(p), a))


def test_parse_roundtrip():
    p = parse_polynomial("x^2*y - 3/2*y + 4", ["x", "y"])
    assert p.coefficient((2, 1)) == 1
    assert p.coefficient((0, 1)) == Fraction(-3, 2)
    assert p.coefficient((0, 0)) == 4
    assert parse_polynomial(p.format(["x", "y"]), ["x", "y"]) == p


def test_parse_rejects_unknown_names():
    with pytest.raises(ValueError):
        parse_polynomial("x + z", ["x", "y"])


def test_compose_and_symmetry():
    x, y = SparsePolynomial.variable(2, 0), SparsePolynomial.variable(2, 1)
    assert (x * y + x + y).is_symmetric()
    assert not (x - y).is_symmetric()
    t = SparsePolynomial.variable(1, 0)
    comp = (x * x + y).compose([t + 1, t])
    assert comp == t * t + t * 3 + 1


def test_float_evaluation_path():
    p = parse_polynomial("x^2 + 1", ["x"])
    assert p.evaluate([0.5]) == pytest.approx(1.25)
