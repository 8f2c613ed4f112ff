"""Command line harness: parameter grids, suites, JSON reports and replay.

A case is a plain JSON object naming one identity check; ``run_case`` turns it
into an IdentityReport.  Suites expand a SuiteConfig into a deterministic list
of cases, run them (optionally in worker processes) and collect a RunReport.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import constterm, detcore, selberg, symmetry
from .arith import ForbiddenParameter, DegenerateMeasure, IndexOutOfRange, ParamError, Q, fmt
from .detcore import IdentityReport, Perturbation
from .families import FAMILIES, parse_family

JOBS_ENV = "CASORATI_JOBS"

SUITES = ("main-theorem", "quadratic-theorem", "symmetries", "selberg", "constterm", "all")


# default parameter grids -------------------------------------------------------

F = Fraction

MAIN_GRID: dict[tuple[str, str], list[dict]] = {
    ("jacobi", "derivative"): [
        {"alpha": F(1, 2), "beta": F(3, 2)}, {"alpha": 2, "beta": 3}, {"alpha": F(-1, 3), "beta": F(5, 4)},
        {"alpha": 0, "beta": 0}, {"alpha": F(7, 2), "beta": F(-2, 3)},
    ],
    ("laguerre", "derivative"): [
        {"alpha": F(1, 3)}, {"alpha": 2}, {"alpha": F(-1, 2)}, {"alpha": 0}, {"alpha": F(11, 5)},
    ],
    ("charlier", "delta"): [{"a": 2}, {"a": 1}, {"a": F(1, 2)}, {"a": F(-3, 2)}, {"a": F(5, 3)}],
    ("meixner", "delta"): [
        {"a": F(1, 3), "c": 2}, {"a": 2, "c": F(1, 2)}, {"a": -1, "c": F(3, 2)},
        {"a": F(3, 4), "c": 5}, {"a": F(1, 5), "c": F(-7, 2)},
    ],
    ("krawtchouk", "delta"): [
        {"a": F(1, 2), "N": F(7, 2)}, {"a": 2, "N": F(11, 3)}, {"a": F(-1, 3), "N": F(-5, 2)},
        {"a": 3, "N": 10}, {"a": F(1, 4), "N": F(17, 2)},
    ],
    ("hahn", "delta"): [
        {"alpha": 3, "c": F(1, 3), "N": F(9, 2)}, {"alpha": F(1, 2), "c": 2, "N": F(-5, 3)},
        {"alpha": F(7, 3), "c": F(3, 2), "N": 11}, {"alpha": -1, "c": F(5, 2), "N": F(13, 4)},
        {"alpha": F(9, 2), "c": F(2, 7), "N": F(8, 3)},
    ],
    ("ultraspherical", "tmu"): [
        {"lam": F(3, 2)}, {"lam": 1}, {"lam": F(1, 3)}, {"lam": F(-1, 3)}, {"lam": F(7, 4)},
    ],
    ("meixner", "tmu"): [
        {"a": F(1, 3), "c": 2}, {"a": 2, "c": F(1, 2)}, {"a": -1, "c": F(3, 2)},
        {"a": F(3, 4), "c": 5}, {"a": F(1, 5), "c": F(-7, 2)},
    ],
}

QUADRATIC_GRID: dict[str, list[dict]] = {
    "dualhahn": [
        {"alpha": F(7, 2), "c": F(1, 3), "N": F(9, 2)}, {"alpha": F(-2, 3), "c": 2, "N": F(11, 3)},
        {"alpha": 5, "c": F(3, 4), "N": F(-5, 2)},
    ],
    "racah": [
        {"alpha": F(-9, 2), "beta": F(1, 3), "gamma": F(1, 2), "delta": F(2, 5)},
        {"alpha": F(2, 3), "beta": F(5, 2), "gamma": F(-1, 4), "delta": F(7, 3)},
        {"alpha": F(11, 4), "beta": F(-2, 5), "gamma": 3, "delta": F(1, 6)},
    ],
}

SYMMETRY_GRID: dict[str, list[dict]] = {
    "charlier": [{"a": 2}, {"a": 1}, {"a": F(1, 2)}, {"a": F(-3, 2)}, {"a": F(5, 3)}],
    "meixner": [
        {"a": F(1, 3), "c": F(7, 2)}, {"a": 2, "c": F(1, 2)}, {"a": -1, "c": F(5, 3)},
        {"a": F(3, 4), "c": 5}, {"a": F(1, 5), "c": F(-7, 2)},
    ],
    "krawtchouk": [
        {"a": F(1, 2), "N": F(7, 2)}, {"a": 2, "N": F(11, 3)}, {"a": F(-1, 3), "N": F(-5, 2)},
        {"a": 3, "N": 10}, {"a": F(1, 4), "N": F(17, 2)},
    ],
    "hahn": [
        {"alpha": 3, "c": F(1, 3), "N": F(9, 2)}, {"alpha": F(1, 2), "c": 2, "N": F(-5, 3)},
        {"alpha": F(7, 3), "c": F(3, 2), "N": F(23, 2)}, {"alpha": -1, "c": F(5, 2), "N": F(13, 4)},
        {"alpha": F(9, 2), "c": F(2, 7), "N": F(8, 3)},
    ],
    "dualhahn": [
        {"alpha": F(7, 2), "c": F(1, 3), "N": F(9, 2)}, {"alpha": F(-2, 3), "c": 2, "N": F(11, 3)},
        {"alpha": 5, "c": F(3, 4), "N": F(-5, 2)}, {"alpha": F(1, 7), "c": F(5, 2), "N": F(4, 3)},
        {"alpha": F(13, 3), "c": F(-1, 2), "N": F(7, 4)},
    ],
    "racah": [
        {"alpha": F(-9, 2), "beta": F(1, 3), "gamma": F(1, 2), "delta": F(2, 5)},
        {"alpha": F(2, 3), "beta": F(5, 2), "gamma": F(-1, 4), "delta": F(7, 3)},
        {"alpha": F(11, 4), "beta": F(-2, 5), "gamma": 3, "delta": F(1, 6)},
        {"alpha": F(1, 5), "beta": F(3, 7), "gamma": F(5, 2), "delta": F(-1, 3)},
        {"alpha": F(-7, 3), "beta": 2, "gamma": F(1, 4), "delta": F(3, 2)},
    ],
    "wilson": [
        {"a": F(1, 2), "b": F(1, 3), "c": F(3, 4), "d": 2}, {"a": F(-1, 3), "b": F(5, 2), "c": 1, "d": F(2, 7)},
        {"a": 2, "b": F(1, 5), "c": F(-3, 2), "d": F(4, 3)}, {"a": F(5, 4), "b": 3, "c": F(1, 6), "d": F(-2, 5)},
        {"a": F(3, 7), "b": F(-1, 4), "c": F(7, 3), "d": F(1, 2)},
    ],
}

# Meixner points where c - n - m lands on 0 or -1 for some n, m <= 4
MEIXNER_DEGENERATE_C = (2, 3, 5, 7)

CT_GRID: dict[str, list[dict]] = {
    "ct-meixner": [{"a": F(1, 3), "c": 2}, {"a": 2, "c": F(1, 2)}, {"a": -1, "c": F(5, 3)}, {"a": F(3, 4), "c": -2}],
    "ct-charlier": [{"a": 2}, {"a": F(1, 2)}, {"a": F(-3, 2)}, {"a": 1}],
    "ct-ultraspherical-I": [{"lam": F(3, 2)}, {"lam": -1}, {"lam": F(1, 3)}, {"lam": 2}],
    "ct-ultraspherical-II": [{"lam": F(3, 2)}, {"lam": 2}, {"lam": F(1, 3)}, {"lam": F(-1, 3)}],
}


# configuration and reports --------------------------------------------------------


@dataclass
class SuiteConfig:
    suite: str = "all"
    families: tuple[str, ...] = ()
    n_max: int = 4
    m_max: int = 4
    grid: tuple[dict, ...] = ()
    seed: int | None = None
    random_points: int = 0
    out: str | None = None
    jobs: int = 1
    perturb: dict | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"suite: unknown value {self.suite!r}; expected one of {SUITES}")
        if self.n_max < 0 or self.m_max < 0:
            raise ValueError("n_max/m_max: caps must be nonnegative")
        if self.jobs < 1:
            raise ValueError("jobs: need at least one worker")

    def wants(self, name: str) -> bool:
        return not self.families or name in self.families


@dataclass
class RunReport:
    cases: list[dict]
    seed: int | None
    wall_clock: float = 0.0
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            keys = ("pass", "fail", "skipped_guard", "skipped_forbidden")
            counts = {k: 0 for k in keys}
            for c in self.cases:
                counts[c["status"]] += 1
            counts["total"] = len(self.cases)
            self.summary = counts

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {"seed": self.seed, "summary": self.summary, "cases": self.cases}
        if timing:
            out["wall_clock_s"] = round(self.wall_clock, 3)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=1)

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["kind", "family", "n", "m", "status"])
            for c in self.cases:
                case = c["case"]
                w.writerow([case["kind"], case.get("family", ""), case.get("n", ""), case.get("m", ""), c["status"]])


# cases ---------------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def make_case(kind: str, **fields) -> dict:
    return {"kind": kind, **_jsonable(fields)}


def _fam_spec(name: str, params: dict) -> str:
    return f"{name}:" + ",".join(f"{k}={fmt(Q(v))}" for k, v in params.items())


def _perturbation(d: dict | None) -> Perturbation | None:
    if not d:
        return None
    return Perturbation(d["kind"], int(d.get("i", 0)), int(d.get("j", 0)))


def _params(case: dict) -> dict:
    return {k: Q(v) for k, v in case.get("params", {}).items()}


def _lemma_report(u, bound: int) -> IdentityReport:
    u = Q(u)
    checks = {
        "r_is_f_of_lambda": all(detcore.lemma_r_is_f_of_lambda(k, u) for k in range(bound + 1)),
        "delta_power": all(detcore.lemma_delta_power(l, k, u)
                           for k in range(bound + 1) for l in range(k + 1)),
        "nabla_s": all(detcore.lemma_nabla_s(k, l, n, m, u)
                       for k in range(bound + 1) for l in range(bound + 1)
                       for n in range(1, bound + 1) for m in range(1, bound + 1)),
        "convolution": all(detcore.lemma_convolution(l, k, m, n, u)
                           for l in range(bound) for k in range(-3, 4)
                           for n in range(1, bound + 1) for m in range(1, bound + 1) if m + k >= 1),
        "fkm": detcore.verify_fkm_identities(u, bound),
    }
    return IdentityReport("quadratic-lemmas", "lattice", bound, 0, 0, 0, {"u": u}, {"u": u}, checks)


def _symmetry_report(case: dict) -> IdentityReport:
    sc = symmetry.SymmetryCase.make(case["family"], case["n"], case["m"], x=case.get("x"), **_params(case))
    rep = symmetry.verify_symmetry(sc, _perturbation(case.get("perturb")))
    if case.get("involution", True):
        rep.checks["involution"] = symmetry.verify_involution(sc)
        rep.holds = rep.holds and rep.checks["involution"]
    return rep


def run_case(case: dict) -> IdentityReport:
    """Execute one case object and return its report."""
    kind = case["kind"]
    perturb = _perturbation(case.get("perturb"))
    n, m = case.get("n", 0), case.get("m", 0)
    if kind == "main":
        return detcore.verify_main(parse_family(case["family"]), n, m, op=case.get("op"), perturb=perturb)
    if kind == "quadratic":
        return detcore.verify_quadratic(parse_family(case["family"]), n, m, perturb=perturb)
    if kind == "lemmas":
        return _lemma_report(case["u"], case.get("bound", 4))
    if kind == "symmetry":
        return _symmetry_report(case)
    if kind == "charlier-conjecture":
        lhs, rhs = symmetry.charlier_conjecture(case["a"], n, case["k"], m)
        return IdentityReport("charlier-conjecture", "charlier", n, m, lhs, rhs, {"k": case["k"]}, {"a": Q(case["a"])})
    if kind == "duality":
        fam = parse_family(case["family"])
        ok = symmetry.duality_check(fam, case.get("bound", 5))
        return IdentityReport("duality", fam.name, 0, 0, 0, 0, {}, dict(fam.params), {"duality": ok})
    if kind == "tise":
        return selberg.verify_tise(parse_family(case["family"]), case["op"], n, m, case["u"], perturb=perturb)
    if kind == "tise-corollary":
        return selberg.verify_tise_corollary(parse_family(case["family"]), case["which"], n, m, case["u"])
    if kind == "heine":
        fam = parse_family(case["family"])
        mu = fam.measure()
        lhs = selberg.brute_force_sum(mu, m)
        rhs = selberg.hankel_det(mu.moment, m) * selberg.factorial(m)
        return IdentityReport("heine", fam.name, 0, m, lhs, rhs, {}, dict(fam.params))
    if kind == "jacobi-selberg":
        return selberg.verify_jacobi_selberg_gamma1(case["alpha"], case["beta"], m)
    if kind == "racah-selberg":
        return selberg.verify_racah_selberg(case["N"], Q(case["beta"]), Q(case["gamma"]), Q(case["delta"]), n, m)
    if kind == "dyson":
        return constterm.verify_dyson_k1(n)
    if kind == "morris":
        return constterm.verify_morris_k1(n, m, case["x"], case["a"])
    if kind == "ct-meixner":
        p = _params(case)
        return constterm.verify_ct_meixner(n, m, p["a"], p["c"], xs=case.get("x"), perturb=perturb)
    if kind == "ct-charlier":
        return constterm.verify_ct_charlier(n, m, _params(case)["a"], xs=case.get("x"), perturb=perturb)
    if kind == "ct-ultraspherical-I":
        return constterm.verify_ct_ultraspherical_I(n, m, _params(case)["lam"], xs=case.get("x"), perturb=perturb)
    if kind == "ct-ultraspherical-II":
        return constterm.verify_ct_ultraspherical_II(n, m, _params(case)["lam"], xs=case.get("x"), perturb=perturb)
    raise ValueError(f"kind: unknown case kind {kind!r}")


def execute(case: dict) -> dict:
    """Run a case and record its status; never raises."""
    try:
        rep = run_case(case)
    except IndexOutOfRange as exc:
        return {"case": case, "status": "skipped_guard", "detail": str(exc)}
    except (ForbiddenParameter, DegenerateMeasure) as exc:
        return {"case": case, "status": "skipped_forbidden", "detail": str(exc)}
    except Exception as exc:  # isolation: one broken case must not stop the suite
        return {"case": case, "status": "fail", "error": f"{type(exc).__name__}: {exc}",
                "trace": traceback.format_exc(limit=3)}
    return {"case": case, "status": "pass" if rep.holds else "fail", "report": rep.to_dict()}


# suite expansion -----------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        v = Fraction(num, den)
        if v.denominator > 1:
            return v


def random_points(name: str, count: int, rng: random.Random) -> list[dict]:
    """Seeded generic parameter points, rejection sampled through the family validator."""
    cls = FAMILIES[name]
    out = []
    tries = 0
    while len(out) < count and tries < 100 * (count + 1):
        tries += 1
        p = {k: random_rational(rng) for k in cls.param_names}
        if name == "meixner" and p["a"] in (0, 1):
            continue
        try:
            cls(**p)
        except ParamError:
            continue
        out.append(p)
    return out


def _grid_for(cfg: SuiteConfig, name: str, default: list[dict], rng: random.Random | None) -> list[dict]:
    pts = list(cfg.grid) if cfg.grid and cfg.families == (name,) else list(default)
    if rng is not None and cfg.random_points:
        pts += random_points(name, cfg.random_points, rng)
    return pts


def main_cases(cfg: SuiteConfig, rng=None) -> list[dict]:
    cases = []
    for (name, op), grid in MAIN_GRID.items():
        if not cfg.wants(name):
            continue
        for p in _grid_for(cfg, name, grid, rng):
            for n in range(1, cfg.n_max + 1):
                for m in range(1, cfg.m_max + 1):
                    cases.append(make_case("main", family=_fam_spec(name, p), op=op, n=n, m=m, perturb=cfg.perturb))
    return cases


def quadratic_cases(cfg: SuiteConfig, rng=None) -> list[dict]:
    cases = []
    for name, grid in QUADRATIC_GRID.items():
        if not cfg.wants(name):
            continue
        for p in _grid_for(cfg, name, grid, rng):
            for n in range(1, min(cfg.n_max, 3) + 1):
                for m in range(1, min(cfg.m_max, 3) + 1):
                    cases.append(make_case("quadratic", family=_fam_spec(name, p), n=n, m=m, perturb=cfg.perturb))
    if cfg.wants("lattice"):
        us = [F(3, 7), F(-5, 2), F(11, 3)]
        if rng is not None:
            us.append(random_rational(rng))
        cases += [make_case("lemmas", u=u, bound=4) for u in us]
    return cases


def symmetry_cases(cfg: SuiteConfig, rng=None) -> list[dict]:
    cases = []
    for kind, grid in SYMMETRY_GRID.items():
        if not cfg.wants(kind):
            continue
        cap = 3 if kind in ("racah", "wilson") else 4
        pts = _grid_for(cfg, kind, grid, rng)
        if kind == "meixner":
            pts = pts + [{"a": F(1, 3), "c": c} for c in MEIXNER_DEGENERATE_C]
        for p in pts:
            for n in range(min(cfg.n_max, cap) + 1):
                for m in range(min(cfg.m_max, cap) + 1):
                    cases.append(make_case("symmetry", family=kind, params=p, n=n, m=m, perturb=cfg.perturb))
    if cfg.wants("charlier"):
        for a in (1, 2, F(-1, 2), F(3, 5), -3):
            for n in range(4):
                for k in range(4):
                    for m in range(6):
                        cases.append(make_case("charlier-conjecture", a=a, n=n, k=k, m=m))
    duals = {"charlier": {"a": F(3, 2)}, "meixner": {"a": F(1, 3), "c": F(5, 2)},
             "krawtchouk": {"a": F(2, 3), "N": F(13, 2)}, "dualhahn": {"alpha": F(7, 2), "c": F(1, 3), "N": F(9, 2)}}
    for name, p in duals.items():
        if cfg.wants(name):
            cases.append(make_case("duality", family=_fam_spec(name, p), bound=5))
    return cases


def selberg_cases(cfg: SuiteConfig, rng=None) -> list[dict]:
    cases = []
    finite = []
    if cfg.wants("krawtchouk"):
        finite += [_fam_spec("krawtchouk", {"a": a, "N": N}) for N in range(1, 6) for a in (F(1, 2), 2)]
    if cfg.wants("hahn"):
        finite += [_fam_spec("hahn", {"alpha": F(7, 2), "c": F(1, 2), "N": N}) for N in range(1, 5)]
        finite += [_fam_spec("hahn", {"alpha": 4, "c": 1, "N": N}) for N in range(1, 5)]
    if cfg.wants("dualhahn"):
        finite += [_fam_spec("dualhahn", {"alpha": F(9, 2), "c": F(1, 3), "N": N}) for N in range(1, 5)]
    for spec in finite:
        size = int(parse_family(spec).support_size())
        for op in ("derivative", "delta"):
            for n in range(min(cfg.n_max, 3) + 1):
                for m in range(1, min(cfg.m_max, 3) + 1):
                    if m + n - 1 > size:
                        continue
                    for u in (0, 1, -1):
                        cases.append(make_case("tise", family=spec, op=op, n=n, m=m, u=u, perturb=cfg.perturb))
                        if op == "delta":
                            for which in (1, 2):
                                cases.append(make_case("tise-corollary", family=spec, which=which, n=n, m=m, u=u))
        for m in range(1, min(cfg.m_max, 4) + 1):
            cases.append(make_case("heine", family=spec, m=m))
    if cfg.wants("jacobi"):
        vals = (1, 2, 3, F(5, 2))
        for a in vals:
            for b in vals:
                for m in range(1, min(cfg.m_max, 4) + 1):
                    cases.append(make_case("jacobi-selberg", alpha=a, beta=b, m=m))
    if cfg.wants("racah"):
        pts = [(F(1, 3), F(1, 2), F(2, 5)), (7, 1, 1), (9, 2, 1), (F(-5, 2), F(3, 4), F(1, 3))]
        for beta, gamma, delta in pts:
            for N in range(1, 4):
                for m in range(0, 3):
                    for n in range(0, 2):
                        cases.append(make_case("racah-selberg", N=N, beta=beta, gamma=gamma, delta=delta, n=n, m=m))
    return cases


def constterm_cases(cfg: SuiteConfig, rng=None) -> list[dict]:
    cases = []
    if cfg.wants("dyson"):
        cases += [make_case("dyson", n=n) for n in range(1, 5)]
    if cfg.wants("morris"):
        for n in range(1, 4):
            for x in range(0, 5):
                for m in range(0, x + 1):
                    for a in (1, 2, F(1, 2)):
                        cases.append(make_case("morris", n=n, m=m, x=x, a=a))
    for kind, grid in CT_GRID.items():
        name = kind.split("-")[1]
        if not (cfg.wants(kind) or cfg.wants(name)):
            continue
        for p in grid:
            for n in range(1, min(cfg.n_max, 3) + 1):
                for m in range(1, min(cfg.m_max, 3) + 1):
                    cases.append(make_case(kind, params=p, n=n, m=m, perturb=cfg.perturb))
    return cases


_BUILDERS = {
    "main-theorem": main_cases,
    "quadratic-theorem": quadratic_cases,
    "symmetries": symmetry_cases,
    "selberg": selberg_cases,
    "constterm": constterm_cases,
}


def build_cases(cfg: SuiteConfig) -> list[dict]:
    rng = random.Random(cfg.seed) if cfg.seed is not None else None
    names = list(_BUILDERS) if cfg.suite == "all" else [cfg.suite]
    cases = []
    for name in names:
        cases += _BUILDERS[name](cfg, rng)
    return cases


def run_cases(cases: Sequence[dict], jobs: int = 1) -> list[dict]:
    if jobs <= 1 or len(cases) < 2:
        return [execute(c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(execute, cases, chunksize=max(1, len(cases) // (8 * jobs))))


def run_suite(cfg: SuiteConfig) -> RunReport:
    start = time.perf_counter()
    results = run_cases(build_cases(cfg), cfg.jobs)
    report = RunReport(results, cfg.seed, time.perf_counter() - start)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(report.to_json())
    return report


def replay(case_json: str | dict) -> IdentityReport:
    """Re-run one case from a case object, a report entry, or their JSON text."""
    obj = json.loads(case_json) if isinstance(case_json, str) else case_json
    if not isinstance(obj, dict):
        raise ValueError("replay: expected a JSON object")
    if "case" in obj:
        obj = obj["case"]
    if "kind" not in obj:
        raise ValueError("replay: case object has no 'kind'")
    return run_case(obj)


# argument parsing --------------------------------------------------------------------


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise SystemExit(f"{JOBS_ENV}: expected an integer, got {raw!r}")


def parse_grid(text: str | None) -> tuple[dict, ...]:
    """``"a=1/2,c=3;a=2,c=1/2"`` -> parameter points."""
    if not text:
        return ()
    points = []
    for pos, chunk in enumerate(filter(None, (c.strip() for c in text.split(";")))):
        point = {}
        for item in chunk.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"--grid point {pos}: bad item {item!r}")
            try:
                point[key.strip()] = Fraction(val.strip())
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"--grid point {pos}: {key.strip()}: not a rational {val.strip()!r}") from None
        points.append(point)
    return tuple(points)


def parse_perturb(text: str | None) -> dict | None:
    """``sign``, ``moment:i,j`` or ``pochhammer:l``."""
    if not text:
        return None
    kind, _, rest = text.partition(":")
    idx = [int(v) for v in rest.split(",") if v.strip()] if rest else []
    return {"kind": kind, "i": idx[0] if idx else 0, "j": idx[1] if len(idx) > 1 else 0}


def _emit(rep: IdentityReport, full: bool) -> int:
    print(rep.to_json(full=full))
    return 0 if rep.holds else 1


def _cmd_verify(args) -> int:
    fam = parse_family(args.family)
    case = {"n": args.n, "m": args.m, "perturb": parse_perturb(args.perturb)}
    identity = args.identity
    if identity == "auto":
        identity = "quadratic" if fam.lattice == "quadratic" else "main"
    if identity == "symmetry":
        case.update(kind="symmetry", family=fam.name, params=_jsonable(fam.params), x=args.x)
    else:
        case.update(kind=identity, family=fam.spec_string(), op=args.op)
    return _emit(run_case(case), args.full)


def _cmd_selberg(args) -> int:
    action = args.action.replace("verify-", "")
    if action == "tise":
        case = make_case("tise", family=args.family, op=args.op, n=args.n, m=args.m, u=Q(args.u))
    elif action == "corollary":
        case = make_case("tise-corollary", family=args.family, which=args.which, n=args.n, m=args.m, u=Q(args.u))
    elif action == "racah":
        case = make_case("racah-selberg", N=args.N, beta=Q(args.beta), gamma=Q(args.gamma), delta=Q(args.delta),
                         n=args.n, m=args.m)
    else:
        case = make_case("jacobi-selberg", alpha=Q(args.alpha), beta=Q(args.beta), m=args.m)
    return _emit(run_case(case), args.full)


def _cmd_ct(args) -> int:
    ident = args.identity
    xs = None if args.x is None else [Q(v) for v in args.x.split(",")]
    if ident == "dyson":
        case = make_case("dyson", n=args.n)
    elif ident == "morris":
        if args.x is None:
            raise SystemExit("ct morris: --x is required")
        case = make_case("morris", n=args.n, m=args.m, x=int(Q(args.x)), a=Q(args.a))
    else:
        kind = {"meixner": "ct-meixner", "charlier": "ct-charlier",
                "ultraspherical-1": "ct-ultraspherical-I", "ultraspherical-2": "ct-ultraspherical-II"}[ident]
        params = {}
        for key in ("a", "c", "lam"):
            v = getattr(args, key)
            if v is not None:
                params[key] = Q(v)
        case = make_case(kind, n=args.n, m=args.m, params=params, x=xs)
    return _emit(run_case(case), args.full)


def _cmd_suite(args) -> int:
    fams = tuple(f.strip() for f in args.family.split(",")) if args.family else ()
    cfg = SuiteConfig(suite=args.suite, families=fams, n_max=args.n, m_max=args.m, grid=parse_grid(args.grid),
                      seed=args.seed, random_points=args.random_points, out=args.out, jobs=args.jobs,
                      perturb=parse_perturb(args.perturb))
    report = run_suite(cfg)
    if args.csv:
        report.write_csv(args.csv)
    s = report.summary
    print(f"{cfg.suite}: {s['pass']} pass, {s['fail']} fail, {s['skipped_guard']} skipped (guard), "
          f"{s['skipped_forbidden']} skipped (forbidden) of {s['total']} in {report.wall_clock:.1f}s")
    for c in report.cases:
        if c["status"] == "fail":
            print("FAIL", json.dumps(c["case"], sort_keys=True))
    return 0 if report.ok else 1


def _cmd_replay(args) -> int:
    with open(args.file) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "cases" in obj:
        obj = obj["cases"][args.index]
    elif isinstance(obj, list):
        obj = obj[args.index]
    return _emit(replay(obj), args.full)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="casorati", description="Exact verification of Casorati and Wronskian determinant identities.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check one determinant identity")
    v.add_argument("--family", required=True, help='e.g. "meixner:a=1/3,c=2"')
    v.add_argument("--op", default=None, help="derivative, delta or tmu (defaults to the family's operator)")
    v.add_argument("--identity", default="auto", choices=("auto", "main", "quadratic", "symmetry"))
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--x", default=None, help="evaluate a symmetry at this rational x")
    v.add_argument("--perturb", default=None, help="sign, moment:i,j or pochhammer:l")
    v.add_argument("--full", action="store_true", help="include both sides in the JSON")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("selberg", help="Vandermonde-squared sums")
    s.add_argument("action", choices=("tise", "verify-tise", "corollary", "racah", "jacobi"))
    s.add_argument("--family", default=None)
    s.add_argument("--op", default="delta", choices=("derivative", "delta"))
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--u", default="0")
    s.add_argument("--which", type=int, default=1, choices=(1, 2))
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--alpha", default="1")
    s.add_argument("--beta", default="1")
    s.add_argument("--gamma", default="1")
    s.add_argument("--delta", default="1")
    s.add_argument("--full", action="store_true")
    s.set_defaults(func=_cmd_selberg)

    c = sub.add_parser("ct", help="constant-term identities")
    c.add_argument("verb", choices=("verify",))
    c.add_argument("--identity", required=True,
                   choices=("meixner", "charlier", "ultraspherical-1", "ultraspherical-2", "morris", "dyson"))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--x", default=None, help="rational x, or a comma list; default is a grid")
    c.add_argument("--a", default=None)
    c.add_argument("--c", default=None)
    c.add_argument("--lam", default=None)
    c.add_argument("--full", action="store_true")
    c.set_defaults(func=_cmd_ct)

    u = sub.add_parser("suite", help="run a batch of cases")
    u.add_argument("--suite", default="all", choices=SUITES)
    u.add_argument("--family", default=None, help="comma separated family filter")
    u.add_argument("--n", type=int, default=4, help="cap on n")
    u.add_argument("--m", type=int, default=4, help="cap on m")
    u.add_argument("--grid", default=None, help='explicit points "a=1/2,c=3;a=2,c=1/2" for a single family')
    u.add_argument("--seed", type=int, default=None)
    u.add_argument("--random-points", type=int, default=0, help="seeded random points added per family")
    u.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")
    u.add_argument("--out", default=None, help="write the JSON report here")
    u.add_argument("--csv", default=None, help="write a CSV summary here")
    u.add_argument("--perturb", default=None, help="apply a negative-control perturbation to every case")
    u.set_defaults(func=_cmd_suite)

    r = sub.add_parser("replay", help="re-run one case from a report or case file")
    r.add_argument("file")
    r.add_argument("--index", type=int, default=0)
    r.add_argument("--full", action="store_true")
    r.set_defaults(func=_cmd_replay)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) is None:
        args.jobs = default_jobs()
    try:
        return args.func(args)
    except (ValueError, ParamError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
