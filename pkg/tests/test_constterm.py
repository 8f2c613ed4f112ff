from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casorati.arith import ForbiddenParameter, IndexOutOfRange
from casorati.constterm import (
    LaurentPoly,
    constant_term,
    ct_engine,
    ct_oracle,
    degree_bound,
    dyson_product,
    expand_series,
    needed_order,
    pair_factor_ii,
    symmetric_under_permutation,
    ultraspherical_i_lhs,
    ultraspherical_i_x0,
    ultraspherical_ii_x1,
    vandermonde_squared,
    verify_ct_charlier,
    verify_ct_meixner,
    verify_ct_ultraspherical_I,
    verify_ct_ultraspherical_II,
    verify_dyson_k1,
    verify_morris_k1,
)
from casorati.detcore import Perturbation
from casorati.families import Charlier, Meixner
from casorati.poly import X, Poly

from conftest import rationals

F = Fraction


@st.composite
def laurent(draw, nvars=2):
    items = draw(st.dictionaries(
        st.tuples(*[st.integers(-2, 2)] * nvars), rationals(7, nonzero=True), max_size=6))
    return LaurentPoly(nvars, items)


# examples ---------------------------------------------------------------------------


def test_series_examples():
    assert expand_series("meixner", 2, 0, a=F(1, 2), c=1) == Poly([1, 1, 1])
    assert expand_series("charlier", 2, 1, a=1) == Poly([1, 0, F(-1, 2)])
    for x in (F(0), F(2, 3), F(-5)):
        assert expand_series("ultraspherical", 2, x, lam=1) == Poly([1, 2 * x, 4 * x**2 - 1])


def test_series_match_family_polynomials():
    a, c = F(1, 3), F(5, 2)
    for x in (F(1, 2), F(3), F(-7, 4)):
        s = expand_series("meixner", 6, x, a=a, c=c)
        assert [s[k] for k in range(7)] == [Meixner(a=a, c=c).generating(k)(x) for k in range(7)]
        s = expand_series("charlier", 6, x, a=a)
        assert [s[k] for k in range(7)] == [Charlier(a=a).normalized(k)(x) for k in range(7)]


def test_series_forbidden():
    with pytest.raises(ForbiddenParameter):
        expand_series("meixner", 3, 1, a=0, c=1)
    with pytest.raises(ForbiddenParameter):
        expand_series("charlier", 3, 1, a=0)
    with pytest.raises(ValueError):
        expand_series("hermite", 3, 1)


def test_constant_term_examples():
    assert constant_term(dyson_product(2)) == 2
    assert constant_term(LaurentPoly.monomial((1, -1))) == 0
    assert constant_term(LaurentPoly.const(2, F(5, 3))) == F(5, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dyson(n):
    rep = verify_dyson_k1(n)
    assert rep.holds
    assert rep.lhs == [1, 2, 6, 24][n - 1]


def test_morris_examples():
    assert verify_morris_k1(1, 0, 4, 2).lhs == 1
    for x in range(1, 5):
        rep = verify_morris_k1(1, 1, x, F(1, 2))
        assert rep.holds and rep.lhs == -x / F(1, 2)
    rep = verify_morris_k1(2, 1, 3, 2)
    assert rep.holds and rep.lhs == -3


@pytest.mark.parametrize("a", [1, 2, F(1, 2)])
def test_morris_grid(a):
    for n in range(1, 4):
        for x in range(5):
            for m in range(x + 1):
                assert verify_morris_k1(n, m, x, a).holds


def test_morris_domain():
    with pytest.raises(ForbiddenParameter):
        verify_morris_k1(2, 3, 2, 1)
    with pytest.raises(ForbiddenParameter):
        verify_morris_k1(2, 1, 2, 0)


def test_frozen_charlier_values():
    assert verify_ct_charlier(2, 1, 2, xs=[1]).lhs == -2
    assert verify_ct_charlier(1, 1, 1, xs=[2]).lhs == 1
    rep = verify_ct_charlier(1, 0, 3, xs=[F(1, 2)])
    assert rep.holds and rep.lhs == 1


def test_frozen_meixner_linear():
    a, c = F(1, 3), 2
    rep = verify_ct_meixner(1, 1, a, c)
    assert rep.holds
    assert rep.lhs == c + X - X / a


def test_meixner_m1_display():
    # m = 1: (-1)^{binom(n+1,2)} n! m_n^{a,-c-n+1}(-x)
    a, c = F(1, 3), F(5, 2)
    rep = verify_ct_meixner(2, 1, a, c)
    want = Meixner(a=a, c=-c - 1).generating(2).compose(-X) * (2 * (-1) ** 3)
    assert rep.holds and rep.lhs == want


def test_meixner_specializes_to_morris():
    a = F(2)
    for n in range(1, 3):
        for x in range(3):
            for m in range(x + 1):
                # c = -x - n + 1 collapses the (1-z) factor
                c = -x - n + 1
                ct = verify_ct_meixner(n, m, a, c, xs=[x])
                mo = verify_morris_k1(n, m, x, a)
                assert ct.lhs == mo.lhs


def test_meixner_pipeline_check():
    rep = verify_ct_meixner(2, 2, F(1, 3), 2, xs=[5], pipeline=True)
    assert rep.holds and rep.checks["main_pipeline"]


def test_frozen_ultraspherical_x0():
    assert ultraspherical_i_x0(2, 2, F(3, 2)) == F(-9, 2)
    rep = verify_ct_ultraspherical_I(2, 2, F(3, 2))
    assert rep.holds and rep.lhs(0) == F(-9, 2)


@pytest.mark.parametrize("lam", [F(3, 2), -1, 2, F(-1, 3), F(5, 7), -2])
def test_closed_forms(lam):
    for n in range(1, 5):
        for m in range(1, 5):
            assert ultraspherical_i_x0(n, m, lam) == ultraspherical_i_lhs(n, m, lam, 0)


def test_ultraspherical_ii_x1():
    for lam in (F(3, 2), 2, F(1, 3)):
        for n in range(1, 4):
            for m in range(1, 4):
                rep = verify_ct_ultraspherical_II(n, m, lam, xs=[1])
                assert rep.holds and rep.lhs == ultraspherical_ii_x1(n, m, lam)


def test_ultraspherical_lam_zero():
    with pytest.raises(ForbiddenParameter):
        verify_ct_ultraspherical_I(2, 2, 0)
    with pytest.raises(ForbiddenParameter):
        verify_ct_ultraspherical_II(2, 2, 0)
    for n in range(1, 4):
        for m in range(1, 4):
            for x in (F(1, 3), F(2), F(-3, 5)):
                assert ultraspherical_i_lhs(n, m, 0, x) == 0


def test_ultraspherical_negative_integer():
    for n in range(1, 4):
        for m in range(1, 4):
            assert verify_ct_ultraspherical_I(n, m, -1).holds


GRID = {
    "meixner": [(F(1, 3), 2), (2, F(1, 2)), (-1, F(5, 3)), (F(3, 4), -2)],
    "charlier": [2, F(1, 2), F(-3, 2), 1],
    "ultraspherical-I": [F(3, 2), -1, F(1, 3), 2],
    "ultraspherical-II": [F(3, 2), 2, F(1, 3), F(-1, 3)],
}


@pytest.mark.parametrize("kind", list(GRID))
def test_ct_grid(kind):
    for p in GRID[kind]:
        for n in range(1, 4):
            for m in range(1, 4):
                if kind == "meixner":
                    rep = verify_ct_meixner(n, m, *p)
                elif kind == "charlier":
                    rep = verify_ct_charlier(n, m, p)
                elif kind == "ultraspherical-I":
                    rep = verify_ct_ultraspherical_I(n, m, p)
                else:
                    rep = verify_ct_ultraspherical_II(n, m, p)
                assert rep.holds, rep.to_dict()
                assert rep.constants["x_points"] == degree_bound(n, m) + 1
                assert rep.checks["window_audit"]


def test_perturbed_rhs_fails():
    assert not verify_ct_charlier(2, 2, 2, perturb=Perturbation("sign")).holds
    assert not verify_ct_ultraspherical_I(2, 2, F(3, 2), perturb=Perturbation("sign")).holds


# engine properties ------------------------------------------------------------------


@given(laurent(), laurent())
def test_laurent_ring(p, q):
    assert p * q == q * p
    assert (p + q) * p == p * p + q * p
    assert (p - p).constant_term() == 0


@given(laurent(3), st.lists(rationals(7), min_size=1, max_size=4), st.integers(0, 3))
def test_engine_matches_oracle(P, head, D):
    need = needed_order(P, D)
    series = (head + [F(k, 7) for k in range(need + 1)])[: need + 1]
    series = series + [F(0)] * (need + 1 - len(series))
    assert ct_engine(P, series, D) == ct_oracle(P, series, D)


@given(laurent(3), st.permutations(range(3)), st.integers(0, 3))
def test_permutation_symmetry(P, perm, D):
    need = needed_order(P, D)
    series = [F(k * k - 3, k + 2) for k in range(need + 1)]
    assert symmetric_under_permutation(P, series, D, perm)


def test_engine_rejects_short_series():
    with pytest.raises(IndexOutOfRange):
        ct_engine(vandermonde_squared(2), [F(1)], 1)


def test_windows_and_factors():
    V = vandermonde_squared(3)
    assert V.exponent_range(0) == (0, 4)
    assert V == V.permute((2, 0, 1))
    assert pair_factor_ii(2).exponent_range(0)[0] < 0
