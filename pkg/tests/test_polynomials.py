"""Exact polynomial arithmetic and substitution."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coherekit.errors import MissingSymbol
from coherekit.polynomials import ONE, ZERO, Poly

x = Poly.sym("x")
y = Poly.sym("y")


def test_construction_and_equality():
    assert Poly.const(0) == ZERO
    assert Poly.const(Fraction(1, 2)) + Poly.const(Fraction(1, 2)) == ONE
    assert x + y == y + x
    assert x - x == ZERO
    assert x * y == y * x
    assert (ONE - x) * (ONE - x) == ONE - 2 * x + x * x


def test_equality_with_numbers():
    assert Poly.const(3) == 3
    assert x * 0 == 0
    assert x != 1


def test_substitute_partial():
    p = x + y * (ONE - x)
    half = p.substitute({"x": Fraction(1, 2)})
    assert half == Fraction(1, 2) + y * Fraction(1, 2)
    assert half.symbols() == {"y"}


def test_value_full_and_missing():
    p = x + y * (ONE - x)
    assert p.value({"x": Fraction(1, 2), "y": Fraction(1, 2)}) == Fraction(3, 4)
    with pytest.raises(MissingSymbol):
        p.value({"x": Fraction(1, 2)})


def test_degree_and_affine():
    p = x * y + y
    assert p.degree_in("x") == 1
    assert p.degree_in("y") == 1
    assert p.degree_in("z") == 0
    assert p.is_affine_in({"x"})
    assert not p.is_affine_in({"x", "y"})


def test_rendering():
    assert str(ZERO) == "0"
    assert str(ONE - x) == "1 - x"
    assert str(x + y * (ONE - x)) == "x + y - x*y"
    assert (x + y).render(aliases={"x": "x1", "y": "x2"}) == "x1 + x2"


@given(
    st.fractions(min_value=-2, max_value=2, max_denominator=8),
    st.fractions(min_value=-2, max_value=2, max_denominator=8),
)
def test_substitution_is_a_homomorphism(a, b):
    val = {"x": a, "y": b}
    p, q = x * y + 1, x - y * y
    assert (p + q).value(val) == p.value(val) + q.value(val)
    assert (p * q).value(val) == p.value(val) * q.value(val)
