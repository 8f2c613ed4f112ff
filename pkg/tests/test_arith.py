from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casorati.arith import (
    DegenerateMeasure,
    ForbiddenParameter,
    IndexOutOfRange,
    ParamError,
    Q,
    abc1_sides,
    abc2_sides,
    abc3_sides,
    binom,
    factorial,
    falling,
    fmt,
    pochhammer,
    sign,
)
from casorati.poly import X, Poly

from conftest import rationals


@pytest.mark.parametrize("u,n,want", [(1, 3, 6), (Fraction(1, 2), 2, Fraction(3, 4)), (-3, 5, 0), (7, 0, 1)])
def test_pochhammer_examples(u, n, want):
    assert pochhammer(Q(u), n) == want


@pytest.mark.parametrize("x,k,want", [(5, 2, 10), (-1, 2, 1), (Fraction(1, 2), 2, Fraction(-1, 8)), (3, 0, 1), (4, -1, 0)])
def test_binom_examples(x, k, want):
    assert binom(Q(x), k) == want


def test_pochhammer_negative_index_and_pole():
    assert pochhammer(Q(5), -2) == Fraction(1, 3 * 4)
    with pytest.raises(ForbiddenParameter):
        pochhammer(Q(1), -1)


def test_rational_text_and_coercion():
    assert fmt(Fraction(6, -4)) == "-3/2"
    assert fmt(4) == "4"
    assert Q("3/7") == Fraction(3, 7)
    with pytest.raises(TypeError):
        Q(0.5)


def test_error_hierarchy():
    for cls in (ForbiddenParameter, DegenerateMeasure, IndexOutOfRange):
        assert issubclass(cls, ParamError)
    with pytest.raises(IndexOutOfRange):
        factorial(-1)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(1, 50))
def test_reduced_canonical_form(p, q, k):
    a = Fraction(p * k, q * k)
    assert a == Fraction(p, q)
    assert a.denominator > 0
    assert abs(a.numerator) == 0 or __import__("math").gcd(a.numerator, a.denominator) == 1


@given(rationals(30), st.integers(0, 20))
def test_pascal_recurrence(x, k):
    assert binom(x, k) == binom(x - 1, k) + binom(x - 1, k - 1)


@given(rationals(), st.integers(0, 12))
def test_falling_is_reflected_rising(u, n):
    assert falling(u, n) == sign(n) * pochhammer(-u, n)


@given(rationals(), st.integers(0, 8), st.integers(0, 8))
def test_abc2(x, i, j):
    lhs, rhs = abc2_sides(x, i, j)
    assert lhs == rhs


@given(rationals(), st.integers(0, 6), st.integers(0, 6), st.data())
def test_abc1(x, n, i, data):
    g = data.draw(st.integers(i, n + i))
    lhs, rhs = abc1_sides(x, n, g, i)
    assert lhs == rhs


@pytest.mark.parametrize("n", range(6))
def test_abc3_polynomial_identity(n):
    # degree in u is at most n, so n+2 distinct u values prove the identity in (x, u)
    us = [Fraction(k, 3) - 1 for k in range(n + 2)]
    for g in range(n + 1):
        for i in range(6):
            for u in us:
                lhs, rhs = abc3_sides(X, u, n, g, i)
                assert isinstance(lhs, Poly)
                assert lhs == rhs


def test_abc_ranges_are_checked():
    with pytest.raises(IndexOutOfRange):
        abc1_sides(Q(1), 2, 5, 1)
    with pytest.raises(IndexOutOfRange):
        abc3_sides(Q(1), Q(0), 2, 3, 0)
