from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casorati.poly import ONE, X, Poly, expand_in_basis

from conftest import rationals


def polys(max_deg: int = 8):
    return st.lists(rationals(9), min_size=0, max_size=max_deg + 1).map(Poly)


def test_eval_examples():
    assert (X**2 - 1)(3) == 8
    assert Poly()(7) == 0
    assert Poly.binomial(3)(5) == 10


def test_compose_examples():
    assert (X**2).compose(X + 1) == X**2 + 2 * X + 1
    p = Poly([1, 2, 3])
    assert p.compose(X) == p
    assert X.compose(X * (X + 2)) == X**2 + 2 * X


def test_operator_examples():
    assert Poly.binomial(4).forward_difference() == Poly.binomial(3)
    assert (X**3).derivative() == 3 * X**2
    assert (X**2).backward_difference() == 2 * X - 1


def test_zero_polynomial_conventions():
    z = Poly()
    assert z.degree == -1 and z.is_zero() and not z
    assert Poly([0, 0, 0]) == z


@given(polys(), polys())
def test_degree_and_leading_coefficient_of_product(p, q):
    if p.is_zero() or q.is_zero():
        assert (p * q).is_zero()
    else:
        assert (p * q).degree == p.degree + q.degree
        assert (p * q).lc == p.lc * q.lc


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p - p == Poly()


@given(polys())
def test_delta_after_shift_is_nabla(p):
    assert p.forward_difference().shift(-1) == p.backward_difference()


@given(polys(12))
def test_newton_round_trip(p):
    assert Poly.from_binomial_basis(p.to_binomial_basis()) == p


@given(polys(), polys(4).filter(lambda q: not q.is_zero()))
def test_divmod(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree
    assert (p * q).exact_div(q) == p


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (X**2 + 1).exact_div(X - 1)


@given(polys(6), rationals(), rationals())
def test_shift_and_compose_agree(p, c, t):
    assert p.shift(c)(t) == p(t + c)
    assert p.compose(X + c) == p.shift(c)


@given(st.lists(rationals(20), min_size=1, max_size=7, unique=True), st.data())
def test_interpolation(xs, data):
    ys = data.draw(st.lists(rationals(), min_size=len(xs), max_size=len(xs)))
    p = Poly.interpolate(xs, ys)
    assert p.degree < len(xs)
    assert [p(v) for v in xs] == ys


def test_expand_in_basis():
    basis = [Poly.binomial(k) for k in range(5)]
    p = X**4 - 3 * X + Fraction(1, 2)
    coeffs = expand_in_basis(p, basis)
    total = Poly()
    for c, b in zip(coeffs, basis):
        total = total + b * c
    assert total == p


def test_text_round_trip():
    p = Poly([Fraction(1, 3), 0, -2])
    assert p.to_list() == ["1/3", "0", "-2"]
    assert Poly.from_list(p.to_list()) == p
    assert ONE.to_list() == ["1"]
