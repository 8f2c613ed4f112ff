from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casorati.families import Charlier, DualHahn, Krawtchouk, Meixner
from casorati.symmetry import (
    KINDS,
    SymmetryCase,
    charlier_conjecture,
    duality_check,
    normalized_casoratian,
    pipeline_agreement,
    verify_involution,
    verify_symmetry,
)
from casorati.poly import X

from conftest import generic

F = Fraction

POINTS = {
    "charlier": {"a": F(5, 3)},
    "meixner": {"a": F(1, 3), "c": F(7, 2)},
    "krawtchouk": {"a": F(-1, 3), "N": F(-5, 2)},
    "hahn": {"alpha": F(7, 3), "c": F(3, 2), "N": F(23, 2)},
    "dualhahn": {"alpha": F(1, 7), "c": F(5, 2), "N": F(4, 3)},
    "racah": {"alpha": F(1, 5), "beta": F(3, 7), "gamma": F(5, 2), "delta": F(-1, 3)},
    "wilson": {"a": F(5, 4), "b": 3, "c": F(1, 6), "d": F(-2, 5)},
}


def test_examples():
    assert normalized_casoratian(SymmetryCase.make("charlier", 1, 1, a=2)) == X - 2
    case = SymmetryCase.make("charlier", 1, 1, a=1)
    assert normalized_casoratian(case) == X - 1
    assert normalized_casoratian(case, "right") * case.sign() == X - 1
    for kind, p in POINTS.items():
        assert normalized_casoratian(SymmetryCase.make(kind, 0, 2, **p)) == 1
        assert verify_symmetry(SymmetryCase.make(kind, 0, 2, **p)).holds


def test_dual_hahn_division_is_exact():
    rep = verify_symmetry(SymmetryCase.make("dualhahn", 2, 2, **POINTS["dualhahn"]))
    assert rep.holds and "exact_division" not in rep.checks


@pytest.mark.parametrize("kind", KINDS)
def test_symmetry_symbolic(kind):
    cap = 3 if kind in ("racah", "wilson") else 4
    for n in range(cap + 1):
        for m in range(cap + 1):
            rep = verify_symmetry(SymmetryCase.make(kind, n, m, **POINTS[kind]))
            assert rep.holds, (n, m, rep.to_dict())


@pytest.mark.parametrize("kind", KINDS)
def test_involution(kind):
    for n, m in ((1, 2), (2, 1), (2, 3)):
        assert verify_involution(SymmetryCase.make(kind, n, m, **POINTS[kind]))


@pytest.mark.parametrize("kind", ["charlier", "meixner", "krawtchouk", "hahn", "dualhahn", "racah"])
def test_pipeline_agreement(kind):
    for n, m in ((1, 1), (2, 2), (3, 1), (1, 3)):
        assert pipeline_agreement(SymmetryCase.make(kind, n, m, **POINTS[kind]))


@pytest.mark.parametrize("c", [2, 3, 4, 5, 6, 7])
def test_meixner_degenerate_points(c):
    # c - n - m in {0, -1} for some n + m <= 8
    for n in range(5):
        for m in range(5):
            assert verify_symmetry(SymmetryCase.make("meixner", n, m, a=F(1, 3), c=c)).holds


@given(generic(), st.integers(1, 3), st.integers(1, 3))
def test_charlier_random(a, n, m):
    assert verify_symmetry(SymmetryCase.make("charlier", n, m, a=a)).holds


def test_pointwise_mode():
    rep = verify_symmetry(SymmetryCase.make("hahn", 2, 3, x=F(7, 5), **POINTS["hahn"]))
    assert rep.holds and rep.lhs.degree <= 0


@pytest.mark.parametrize("a", [1, 2, F(-1, 2)])
def test_charlier_conjecture_form(a):
    for n in range(4):
        for k in range(4):
            for m in range(6):
                lhs, rhs = charlier_conjecture(a, n, k, m)
                assert lhs == rhs


def test_duality_rewrites():
    for fam in (Charlier(a=F(3, 2)), Meixner(a=F(1, 3), c=F(5, 2)), Krawtchouk(a=F(2, 3), N=F(13, 2)),
                DualHahn(alpha=F(7, 2), c=F(1, 3), N=F(9, 2))):
        assert duality_check(fam, 5)


def test_sign_perturbation_fails():
    from casorati.detcore import Perturbation

    rep = verify_symmetry(SymmetryCase.make("charlier", 1, 1, a=2), Perturbation("sign"))
    assert not rep.holds


def test_unknown_kind():
    with pytest.raises(ValueError):
        SymmetryCase.make("jacobi", 1, 1, alpha=1, beta=1)
