"""The eight acceptance criteria, each run exactly and timed.

Every criterion prints one PASS/FAIL line (also repeated in the terminal
summary). Run alone with ``pytest tests/test_acceptance.py -s``.
"""

import time
from fractions import Fraction

import pytest

from casorati.arith import abc1_sides, abc2_sides, abc3_sides
from casorati.cli import SuiteConfig, build_cases, run_cases, run_suite
from casorati.constterm import degree_bound
from casorati.detcore import build_setting, det_poly, omega_product_formula, scaled_setting, verify_main
from casorati.families import (
    Charlier,
    DualHahn,
    Hahn,
    Jacobi,
    Krawtchouk,
    Laguerre,
    Meixner,
    Racah,
    chebyshev_first,
    chebyshev_second,
)
from casorati.operators import build_adapted_basis, build_inverse_sequence, operator_from_name
from casorati.poly import X, Poly

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance

F = Fraction


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def summarize(results):
    counts = {}
    for r in results:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    return counts


def run(cases):
    start = time.perf_counter()
    results = run_cases(cases)
    return results, time.perf_counter() - start


def failures(results):
    return [r["case"] for r in results if r["status"] != "pass"]


def test_criterion_1_master_theorem():
    cases = build_cases(SuiteConfig(suite="main-theorem", n_max=4, m_max=4))
    fams = {(c["family"].split(":")[0], c["op"]) for c in cases}
    points = {}
    for c in cases:
        key = (c["family"].split(":")[0], c["op"])
        points.setdefault(key, set()).add(c["family"])
    results, secs = run(cases)
    ok = not failures(results) and len(fams) == 8 and min(len(v) for v in points.values()) >= 5 and secs < 120
    record(1, "master theorem", ok, f"{summarize(results)} over {len(fams)} family/operator pairs in {secs:.1f}s")
    assert ok, failures(results)[:3]


def test_criterion_2_quadratic_lattice():
    # the seed adds one random lattice parameter u to the fixed ones
    cases = build_cases(SuiteConfig(suite="quadratic-theorem", n_max=3, m_max=3, seed=20261015))
    results, secs = run(cases)
    lemma = [r for r in results if r["case"]["kind"] == "lemmas"]
    ok = not failures(results) and len(lemma) >= 3 and all(
        all(r["report"]["checks"].values()) for r in lemma)
    pts = {c["family"] for c in cases if c["kind"] == "quadratic"}
    record(2, "quadratic-lattice theorem and lattice lemmas", ok,
           f"{summarize(results)}, {len(pts)} parameter points, {len(lemma)} lemma batches in {secs:.1f}s")
    assert ok, failures(results)[:3]


def test_criterion_3_symmetries():
    cases = build_cases(SuiteConfig(suite="symmetries", n_max=4, m_max=4))
    results, secs = run(cases)
    kinds = {c["family"] for c in cases if c["kind"] == "symmetry"}
    degenerate = [c for c in cases if c["kind"] == "symmetry" and c["family"] == "meixner"
                  and F(c["params"]["c"]) - c["n"] - c["m"] in (0, -1)]
    extra = {c["kind"] for c in cases} >= {"charlier-conjecture", "duality"}
    ok = not failures(results) and len(kinds) == 7 and len(degenerate) > 0 and extra
    record(3, "seven symmetry corollaries", ok,
           f"{summarize(results)}, {len(degenerate)} degenerate Meixner cases in {secs:.1f}s")
    assert ok, failures(results)[:3]


def test_criterion_4_tise():
    cfg = SuiteConfig(suite="selberg", families=("krawtchouk", "hahn", "dualhahn"), n_max=3, m_max=3)
    cases = build_cases(cfg)
    results, secs = run(cases)
    heine = [c for c in cases if c["kind"] == "heine"]
    ok = not failures(results) and len(heine) > 0 and secs < 180
    record(4, "Vandermonde-squared sums and Heine", ok, f"{summarize(results)} in {secs:.1f}s")
    assert ok, failures(results)[:3]


def test_criterion_5_selberg_closed_forms():
    cases = build_cases(SuiteConfig(suite="selberg", families=("jacobi", "racah"), n_max=3, m_max=4))
    results, secs = run(cases)
    racah_pts = {(c["beta"], c["gamma"], c["delta"]) for c in cases if c["kind"] == "racah-selberg"}
    ok = not failures(results) and len(racah_pts) >= 3
    record(5, "Jacobi and Racah Selberg sums", ok, f"{summarize(results)} in {secs:.1f}s")
    assert ok, failures(results)[:3]


def test_criterion_6_constant_terms():
    cases = build_cases(SuiteConfig(suite="constterm", n_max=3, m_max=3))
    results, secs = run(cases)
    closed = [r for r in results if r["case"]["kind"] in ("ct-ultraspherical-I", "ct-ultraspherical-II")]
    closed_ok = all(r["report"]["checks"].get("x0_closed_form", r["report"]["checks"].get("x1_closed_form"))
                    for r in closed)
    dyson = [r for r in results if r["case"]["kind"] == "dyson"]
    dense = all(int(r["report"]["constants"]["x_points"]) >= degree_bound(r["case"]["n"], r["case"]["m"]) + 1
                for r in results if r["case"]["kind"].startswith("ct-"))
    ok = not failures(results) and closed_ok and dense and len(dyson) == 4 and secs < 300
    record(6, "constant-term identities", ok, f"{summarize(results)} in {secs:.1f}s")
    assert ok, failures(results)[:3]


def _gfdi() -> bool:
    for op in ("derivative", "delta"):
        for x0, xi in ((F(1, 2), [F(k, 3) for k in range(8)]), (F(-2), [0] * 8)):
            b = build_adapted_basis(operator_from_name(op), x0, xi, 8)
            s = build_inverse_sequence(b)
            for k in range(1, 9):
                if not sum((b[j] * s[k - j] for j in range(k + 1)), Poly()).is_zero():
                    return False
    return True


def _omega_products() -> bool:
    pairs = [(Charlier(a=F(3, 2)), "delta"), (Meixner(a=F(1, 3), c=F(5, 2)), "delta"),
             (Krawtchouk(a=F(2, 3), N=F(13, 2)), "delta"), (Hahn(alpha=F(7, 3), c=F(3, 2), N=11), "delta"),
             (Jacobi(alpha=F(1, 2), beta=F(3, 2)), "derivative"), (Laguerre(alpha=F(1, 3)), "derivative")]
    for fam, op in pairs:
        st = build_setting(fam, 5, op)
        norms = [fam.norm_squared(j) for j in range(6)]
        if any(st.omega(k) != omega_product_formula(st, norms, k) for k in range(6)):
            return False
    return True


def _scale_invariance() -> bool:
    for fam, op in ((Meixner(a=F(1, 3), c=2), "delta"), (Laguerre(alpha=F(1, 3)), "derivative")):
        base = build_setting(fam, 6, op)
        for kappa in (F(5), F(-3, 4)):
            sc = scaled_setting(base, kappa)
            for n in range(1, 4):
                for m in range(1, 4):
                    a = verify_main(fam, n, m, op=op, setting=base, closed_form=False)
                    b = verify_main(fam, n, m, op=op, setting=sc, closed_form=False)
                    if not (a.holds and b.holds and b.rhs == a.rhs * kappa**m):
                        return False
    return True


def _chebyshev() -> bool:
    for fn in (chebyshev_first, chebyshev_second):
        def p(k):
            return fn(k) if k >= 0 else Poly()
        for n in range(3, 6):
            for m in range(2, 5):
                if not det_poly([[p(m + j - i) for j in range(n)] for i in range(n)]).is_zero():
                    return False
    return True


def _orthogonality() -> bool:
    fams = [Krawtchouk(a=F(1, 2), N=6), Hahn(alpha=F(15, 2), c=F(1, 2), N=5),
            DualHahn(alpha=F(9, 2), c=F(1, 3), N=5), Racah.from_N(4, F(1, 3), F(1, 2), F(2, 5))]
    for fam in fams:
        mu = fam.measure()
        top = min(6, fam.support_size() - 1)
        for i in range(top + 1):
            for j in range(top + 1):
                if mu.inner(fam.monic(i), fam.monic(j)) != (fam.norm_squared(i) if i == j else 0):
                    return False
    return True


def _abc() -> bool:
    xs = [F(-7, 3), F(0), F(5, 2)]
    for x in xs:
        for i in range(6):
            for j in range(6):
                lhs, rhs = abc2_sides(x, i, j)
                if lhs != rhs:
                    return False
            for n in range(5):
                for g in range(i, n + i + 1):
                    lhs, rhs = abc1_sides(x, n, g, i)
                    if lhs != rhs:
                        return False
    for n in range(5):
        for g in range(n + 1):
            for i in range(5):
                for u in (F(k, 3) - 1 for k in range(n + 2)):
                    lhs, rhs = abc3_sides(X, u, n, g, i)
                    if lhs != rhs:
                        return False
    return True


def test_criterion_7_property_suites():
    start = time.perf_counter()
    parts = {
        "gfdi": _gfdi(),
        "omega_product": _omega_products(),
        "scale_invariance": _scale_invariance(),
        "chebyshev_vanishing": _chebyshev(),
        "orthogonality_norms": _orthogonality(),
        "abc_lemma": _abc(),
    }
    secs = time.perf_counter() - start
    ok = all(parts.values())
    record(7, "property suites", ok, f"{parts} in {secs:.1f}s")
    assert ok, parts


def test_criterion_8_negative_controls():
    controls = {
        "sign": SuiteConfig(suite="main-theorem", families=("charlier",), n_max=2, m_max=2,
                            perturb={"kind": "sign"}),
        "moment": SuiteConfig(suite="main-theorem", families=("meixner",), n_max=2, m_max=2,
                              perturb={"kind": "moment", "i": 1, "j": 2}),
        "pochhammer": SuiteConfig(suite="quadratic-theorem", families=("racah",), n_max=3, m_max=3,
                                  perturb={"kind": "pochhammer", "i": 1}),
    }
    flipped = {}
    for name, cfg in controls.items():
        clean = run_suite(SuiteConfig(suite=cfg.suite, families=cfg.families, n_max=cfg.n_max, m_max=cfg.m_max))
        bad = run_suite(cfg)
        # a control only counts if the unperturbed run is clean
        flipped[name] = bad.summary["fail"] if clean.ok else 0
    ok = all(v >= 1 for v in flipped.values())
    record(8, "negative controls", ok, f"failing cases per perturbation {flipped}")
    assert ok, flipped
