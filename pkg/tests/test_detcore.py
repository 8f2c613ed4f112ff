import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casorati.arith import DegenerateMeasure, binom, comb2, sign
from casorati.detcore import (
    IdentityReport,
    Perturbation,
    build_setting,
    casorati_matrix,
    det,
    det_cofactor,
    det_poly,
    lemma_convolution,
    lemma_delta_power,
    lemma_nabla_s,
    lemma_r_is_f_of_lambda,
    omega_product_formula,
    q_matrix,
    scaled_setting,
    verify_fkm_identities,
    verify_main,
    verify_quadratic,
    wronskian_matrix,
)
from casorati.families import (
    Charlier,
    DualHahn,
    Hahn,
    Jacobi,
    Krawtchouk,
    Laguerre,
    Meixner,
    Racah,
    Ultraspherical,
    Wilson,
)
from casorati.operators import Derivative, ForwardDifference, f_km, f_poly
from casorati.poly import ONE, X, Poly

from conftest import generic, rationals

F = Fraction

small_polys = st.lists(rationals(5), min_size=0, max_size=3).map(Poly)


def matrices(n):
    return st.lists(st.lists(small_polys, min_size=n, max_size=n), min_size=n, max_size=n)


def test_det_examples():
    assert det([]) == 1
    assert det_poly([[X, ONE], [ONE, X]]) == X**2 - 1
    vals = [0, 1, 2]
    V = det([[F(v) ** i for v in vals] for i in range(3)])
    assert V == (1 - 0) * (2 - 0) * (2 - 1)


@given(st.integers(1, 4).flatmap(matrices))
def test_det_matches_cofactor(M):
    assert det_poly(M) == det_cofactor(M)


@given(st.lists(st.lists(rationals(), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_cofactor_scalars(M):
    assert det(M) == det_cofactor(M)


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det([[1, 2]])


def test_wronskian_shapes():
    ps = [Charlier(a=1).monic(k) for k in range(6)]
    M = wronskian_matrix(ForwardDifference(), ps, 1, 3)
    assert M == [[ps[3]]]
    c = casorati_matrix(ps, 2, 1)
    assert det_poly(c) == ps[1] * ps[2].shift(1) - ps[1].shift(1) * ps[2]
    assert det_poly(c) == det_poly(wronskian_matrix(ForwardDifference(), ps, 2, 1))


def test_q_matrix_shapes():
    st_ = build_setting(Charlier(a=1), 4, "delta")
    assert q_matrix(st_, 3, 1) == [[st_.q(3, 0)]]
    assert det_poly(q_matrix(st_, 3, 0)) == 1


def test_omega_examples():
    st_ = build_setting(Charlier(a=1), 3, "delta")
    assert st_.omega(0) == st_.mu[0][0] == 1
    mu = st_.mu
    # mu^1_j = sum_l binom(j,1-l) binom(j+l,l) mu^0_{j+l}, mu^0_j = 1/j!
    def mu1(j):
        return sum(binom(j, 1 - l) * binom(j + l, l) * F(1, __import__("math").factorial(j + l)) for l in range(2))
    assert [mu[1][j] for j in range(3)] == [mu1(j) for j in range(3)]
    assert st_.omega(1) == mu[0][1] * mu[1][0] - mu[0][0] * mu[1][1]


NORM_FAMILIES = [
    (Charlier(a=F(3, 2)), "delta"),
    (Meixner(a=F(1, 3), c=F(5, 2)), "delta"),
    (Krawtchouk(a=F(2, 3), N=F(13, 2)), "delta"),
    (Hahn(alpha=F(7, 3), c=F(3, 2), N=11), "delta"),
    (Jacobi(alpha=F(1, 2), beta=F(3, 2)), "derivative"),
    (Laguerre(alpha=F(1, 3)), "derivative"),
]


@pytest.mark.parametrize("fam,op", NORM_FAMILIES, ids=lambda v: repr(v))
def test_omega_product_formula(fam, op):
    st_ = build_setting(fam, 5, op)
    norms = [fam.norm_squared(j) for j in range(6)]
    for k in range(6):
        assert st_.omega(k) == omega_product_formula(st_, norms, k)


def test_main_examples():
    rep = verify_main(Meixner(a=F(1, 3), c=2), 2, 2)
    assert rep.holds and rep.residual.is_zero()
    assert verify_main(Laguerre(alpha=0), 2, 1).holds
    for m in range(1, 5):
        rep = verify_main(Charlier(a=2), 1, m)
        assert rep.lhs == Charlier(a=2).monic(m) * rep.constants["Omega_m_minus_1"]
        assert rep.holds


MAIN = [
    (Jacobi(alpha=F(1, 2), beta=F(3, 2)), "derivative"),
    (Laguerre(alpha=F(-1, 2)), "derivative"),
    (Charlier(a=F(-3, 2)), "delta"),
    (Meixner(a=2, c=F(1, 2)), "delta"),
    (Krawtchouk(a=F(1, 2), N=F(7, 2)), "delta"),
    (Hahn(alpha=3, c=F(1, 3), N=F(9, 2)), "delta"),
    (Ultraspherical(lam=F(1, 3)), "tmu"),
    (Meixner(a=F(3, 4), c=5), "tmu"),
]


@pytest.mark.parametrize("fam,op", MAIN, ids=lambda v: repr(v))
def test_main_identity(fam, op):
    for n in range(1, 4):
        for m in range(1, 4):
            rep = verify_main(fam, n, m, op=op)
            assert rep.holds, rep.to_dict()
            assert rep.checks["pseudo_form"] and rep.checks["row_reversal"] and rep.checks["omega_orderings_agree"]


@pytest.mark.parametrize("fam,op", MAIN[:6], ids=lambda v: repr(v))
def test_scale_invariance(fam, op):
    base = build_setting(fam, 5, op)
    for kappa in (F(3), F(-2, 7)):
        scaled = scaled_setting(base, kappa)
        for n, m in ((1, 2), (2, 2), (3, 1), (2, 3)):
            a = verify_main(fam, n, m, op=op, setting=base, closed_form=False)
            b = verify_main(fam, n, m, op=op, setting=scaled, closed_form=False)
            assert a.holds and b.holds
            assert b.rhs == a.rhs * kappa**m
            assert b.lhs == a.lhs * kappa**m


@pytest.mark.parametrize("fam", [Charlier(a=F(5, 3)), Meixner(a=F(1, 5), c=F(-7, 2)), Hahn(alpha=F(7, 3), c=F(3, 2), N=11)], ids=repr)
def test_row_form_equivalence(fam):
    ps = [fam.monic(k) for k in range(8)]
    for n in range(1, 5):
        for m in range(0, 4):
            assert det_poly(casorati_matrix(ps, n, m)) == det_poly(wronskian_matrix(ForwardDifference(), ps, n, m))


def test_derivative_wronskian_rows():
    ps = [Jacobi(alpha=1, beta=2).monic(k) for k in range(5)]
    M = wronskian_matrix(Derivative(), ps, 2, 1)
    assert M == [[ps[1], ps[2]], [ps[1].derivative(), ps[2].derivative()]]


def test_degenerate_measure_reported():
    # Krawtchouk with N = 2 has a two-point measure, so Omega_2 vanishes
    with pytest.raises(DegenerateMeasure):
        verify_main(Krawtchouk(a=1, N=2), 2, 2)


QUAD = [
    DualHahn(alpha=F(7, 2), c=F(1, 3), N=F(9, 2)),
    DualHahn(alpha=5, c=F(3, 4), N=F(-5, 2)),
    Racah(alpha=F(-9, 2), beta=F(1, 3), gamma=F(1, 2), delta=F(2, 5)),
    Racah(alpha=F(11, 4), beta=F(-2, 5), gamma=3, delta=F(1, 6)),
]


@pytest.mark.parametrize("fam", QUAD, ids=repr)
def test_quadratic_identity(fam):
    for n in range(1, 4):
        for m in range(1, 4):
            rep = verify_quadratic(fam, n, m)
            assert rep.holds, rep.to_dict()


def test_quadratic_wilson():
    rep = verify_quadratic(Wilson(a=F(1, 2), b=F(1, 3), c=F(3, 4), d=2), 2, 2)
    assert rep.holds


@given(generic(20))
def test_lattice_lemmas(u):
    for k in range(5):
        assert lemma_r_is_f_of_lambda(k, u)
        for l in range(k + 1):
            assert lemma_delta_power(l, k, u)
    for k in range(3):
        for l in range(3):
            assert lemma_nabla_s(k, l, 2, 2, u)
            assert lemma_convolution(l, k, 2, 2, u)


def test_fkm_examples():
    u = F(3, 7)
    assert f_km(1, 1, u) * f_poly(1, u) == f_poly(2, u) * binom(2, 1)
    assert verify_fkm_identities(u, 4)
    assert f_km(3, 0, u) == ONE


def perturbed(kind, **kw):
    return Perturbation(kind, **kw)


def test_perturbations_break_identities():
    fam = Charlier(a=2)
    assert not verify_main(fam, 2, 2, perturb=perturbed("sign")).holds
    assert not verify_main(fam, 2, 2, perturb=perturbed("moment", i=1, j=2)).holds
    rac = Racah(alpha=F(-9, 2), beta=F(1, 3), gamma=F(1, 2), delta=F(2, 5))
    assert not verify_quadratic(rac, 3, 2, perturb=perturbed("pochhammer", i=1)).holds
    with pytest.raises(ValueError):
        Perturbation("nudge")


def test_report_json():
    rep = verify_main(Charlier(a=2), 2, 1)
    d = json.loads(rep.to_json())
    assert set(d) >= {"identity", "family", "params", "n", "m", "holds", "constants", "residual_degree"}
    assert d["residual_degree"] == -1
    bad = IdentityReport("x", "f", 1, 1, X, X + 1)
    assert not bad.holds and bad.residual == -1
    assert sign(comb2(3)) == -1
