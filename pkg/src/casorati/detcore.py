"""Exact determinants and the Wronskian/Casorati determinant identities.

The canonical statement is the pseudo-orthogonal form

    det(T^{i-1} p_{m+j-1})_{n x n} = C det(q^{j-1}_{n+m-i})_{m x m},
    C = (-1)^{binom(n,2)} prod_{j=0}^{n-2} Omega_{m+j},

with p_k built from the moment table.  The normalized form for an orthogonal
family,

    Omega_{m-1} det(T^{i-1} p_{m+j-1}) = C' det(q^{j-1}_{n+i-1}),
    C' = (-1)^{mn + binom(m,2)} prod_{j=0}^{n-1} xi_{m+j} / sigma_{m+j},

is checked alongside it; the two q-determinants differ by a row reversal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Callable, Sequence

from .arith import DegenerateMeasure, comb2, fmt, pochhammer, sign
from .families import Family, QuadraticFamily, q_quadratic_closed
from .operators import (
    AdaptedBasis,
    BasisLowering,
    InverseSequence,
    LoweringOperator,
    build_adapted_basis,
    build_inverse_sequence,
    f_km,
    f_poly,
    lattice_lambda,
    operator_from_name,
    r_quadratic,
    s_quadratic,
)
from .poly import ONE, X, Poly

PolyMatrix = list[list[Poly]]


# determinants ---------------------------------------------------------------


def det(M: Sequence[Sequence]) -> Any:
    """Fraction-free (Bareiss) determinant; entries are Fractions or Polys.

    The 0 x 0 determinant is 1.
    """
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    A = [list(row) for row in M]
    s = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    s = -s
                    break
            else:
                return A[k][k] * 0
        piv = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) / prev
            row_i[k] = piv * 0
        prev = piv
    return A[n - 1][n - 1] * s


def det_cofactor(M: Sequence[Sequence]) -> Any:
    """Laplace expansion along the first row; an oracle for small sizes."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor) * sign(j)
        total = term if total is None else total + term
    return total


def det_poly(M: PolyMatrix) -> Poly:
    d = det(M)
    return d if isinstance(d, Poly) else Poly.const(d)


# reports --------------------------------------------------------------------


@dataclass
class IdentityReport:
    identity: str
    family: str
    n: int
    m: int
    lhs: Poly
    rhs: Poly
    constants: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    holds: bool | None = None

    def __post_init__(self):
        if not isinstance(self.lhs, Poly):
            self.lhs = Poly.const(self.lhs)
        if not isinstance(self.rhs, Poly):
            self.rhs = Poly.const(self.rhs)
        agree = self.residual.is_zero() and all(self.checks.values())
        self.holds = agree if self.holds is None else (self.holds and agree)

    @property
    def residual(self) -> Poly:
        return self.lhs - self.rhs

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "family": self.family,
            "params": {k: fmt(v) if isinstance(v, (int, Fraction)) else v for k, v in self.params.items()},
            "n": self.n,
            "m": self.m,
            "holds": self.holds,
            "constants": {k: _text(v) for k, v in self.constants.items()},
            "residual_degree": self.residual.degree,
        }
        if self.checks:
            out["checks"] = dict(self.checks)
        if full:
            out["lhs"] = self.lhs.to_list()
            out["rhs"] = self.rhs.to_list()
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def _text(v):
    if isinstance(v, Poly):
        return v.to_list()
    if isinstance(v, (int, Fraction)):
        return fmt(v)
    return v


@dataclass(frozen=True)
class Perturbation:
    """Deliberate corruption used by the negative controls.

    kind: "sign" flips the proportionality constant, "moment" adds one to the
    moment entry mu^i_j seen by the q-side only, "pochhammer" raises the
    index of one Pochhammer factor in a normalizing product.
    """

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("sign", "moment", "pochhammer"):
            raise ValueError(f"unknown perturbation {self.kind!r}")


def _sign_of(perturb: Perturbation | None) -> int:
    return -1 if perturb is not None and perturb.kind == "sign" else 1


def _poch_shift(perturb: Perturbation | None, l: int) -> int:
    """Extra index added to the l-th Pochhammer factor of a normalizing product."""
    if perturb is not None and perturb.kind == "pochhammer" and perturb.i == l:
        return 1
    return 0


# the linear-lattice setting ----------------------------------------------------


@dataclass
class Setting:
    """Operator, adapted basis, psi-basis and generalized moment table."""

    operator: LoweringOperator
    basis: AdaptedBasis
    inverse: InverseSequence
    psi: tuple[Poly, ...]
    mu: list[list[Fraction]]  # mu[i][j] = <r_j, psi_i>
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.basis.rs) - 1

    @property
    def sigma(self) -> tuple[Fraction, ...]:
        return self.basis.sigma

    @property
    def upsilon(self) -> tuple[Fraction, ...]:
        return tuple(p.lc for p in self.psi)

    def q(self, k: int, i: int, mu: list[list[Fraction]] | None = None) -> Poly:
        """q_k^i = sum_j mu^i_j s_{k-j}."""
        mu = self.mu if mu is None else mu
        out = Poly()
        for j in range(k + 1):
            if mu[i][j]:
                out = out + self.inverse[k - j] * mu[i][j]
        return out

    def omega(self, k: int) -> Fraction:
        """Omega_k: rows mu_k ... mu_0, columns psi^0 ... psi^k."""
        return omega(self.mu, k)

    def pseudo(self, k: int) -> Poly:
        """p_k from the bordered moment determinant."""
        return bordered_pseudo(self.mu, self.basis.rs, k)


def omega(mu: list[list[Fraction]], k: int) -> Fraction:
    if k < 0:
        return Fraction(1)
    return det([[mu[c][k - r] for c in range(k + 1)] for r in range(k + 1)])


def omega_ascending(mu: list[list[Fraction]], m: int) -> Fraction:
    """det(mu^{j-1}_{m-i})_{i,j=1}^m, the row ordering used in the normalized form."""
    return det([[mu[j - 1][m - i] for j in range(1, m + 1)] for i in range(1, m + 1)])


def bordered_pseudo(mu, rs: Sequence[Poly], k: int) -> Poly:
    if k == 0:
        return ONE
    rows = []
    for r in range(k + 1):
        idx = k - r
        rows.append([Poly.const(mu[c][idx]) for c in range(k)] + [rs[idx]])
    return det_poly(rows)


def build_setting(family: Family, size: int, op: str | None = None, anchors: Sequence | None = None,
                  psi: Sequence[Poly] | None = None, functional: Callable | None = None) -> Setting:
    """Assemble the setting for a family under one of its operators.

    op: "derivative" (r_n = (x-x0)^n/n!, psi_i = (x-x0)^i), "delta"
    (r_n = binom(x,n), psi_i = binom(x,i)) or "tmu" (r_n = psi_n = p_n in the
    generating normalization).  ``anchors`` and ``psi`` override the defaults.
    """
    op = op or family.operator
    L = functional or family.functional()
    if op == "derivative":
        T: LoweringOperator = operator_from_name("derivative")
        x0 = family.x0
        default_psi = [(X - x0) ** i for i in range(size + 1)]
    elif op == "delta":
        T = operator_from_name("delta")
        x0 = Fraction(0)
        default_psi = [Poly.binomial(i) for i in range(size + 1)]
    elif op == "tmu":
        ps = [family.generating(k) for k in range(size + 1)]
        T = BasisLowering(ps, family.spec_string())
        x0 = family.x0
        if anchors is None:
            anchors = [p(x0) for p in ps[1:]]
        default_psi = ps
    else:
        raise ValueError(f"unknown operator {op!r}")
    if anchors is None:
        anchors = [0] * size
    basis = build_adapted_basis(T, x0, anchors, size)
    inverse = build_inverse_sequence(basis)
    psi = tuple(psi) if psi is not None else tuple(default_psi)
    mu = [[L(basis.rs[j] * psi[i]) for j in range(size + 1)] for i in range(size + 1)]
    return Setting(T, basis, inverse, psi, mu, f"{family.spec_string()}|{op}")


def scaled_setting(st: Setting, kappa) -> Setting:
    kappa = Fraction(kappa)
    mu = [[v * kappa for v in row] for row in st.mu]
    return Setting(st.operator, st.basis, st.inverse, st.psi, mu, st.label + f"|x{kappa}")


# matrices -------------------------------------------------------------------


def wronskian_matrix(T: LoweringOperator, ps: Sequence[Poly], n: int, m: int) -> PolyMatrix:
    """(T^{i-1} p_{m+j-1})_{i,j=1}^n."""
    cols = []
    for j in range(n):
        col = [ps[m + j]]
        for _ in range(n - 1):
            col.append(T.apply(col[-1]))
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def casorati_matrix(ps: Sequence[Poly], n: int, m: int, step: int = 1) -> PolyMatrix:
    """(p_{m+j-1}(x + step*(i-1)))_{i,j=1}^n."""
    return [[ps[m + j].shift(step * i) for j in range(n)] for i in range(n)]


def q_matrix(st: Setting, n: int, m: int, orientation: str = "descending",
             mu: list[list[Fraction]] | None = None) -> PolyMatrix:
    """Descending: (q^{j-1}_{n+m-i}); ascending: (q^{j-1}_{n+i-1})."""
    if orientation == "descending":
        idx = [n + m - i for i in range(1, m + 1)]
    elif orientation == "ascending":
        idx = [n + i - 1 for i in range(1, m + 1)]
    else:
        raise ValueError(orientation)
    return [[st.q(k, j, mu) for j in range(m)] for k in idx]


def _perturbed_mu(st: Setting, perturb: Perturbation | None):
    if perturb is None or perturb.kind != "moment":
        return st.mu
    mu = [list(row) for row in st.mu]
    mu[perturb.i][perturb.j] += 1
    return mu


# the master identity --------------------------------------------------------


def closed_q(family: Family, op: str, k: int, i: int) -> Poly | None:
    """Family closed form for q_k^i under the default anchors and psi, if known."""
    if op == "tmu":
        fn = getattr(family, "q_closed_tmu", None) or (family.q_closed if family.operator == "tmu" else None)
    elif op == family.operator:
        fn = getattr(family, "q_closed", None)
    else:
        fn = None
    return fn(k, i) if fn is not None else None


def verify_main(family: Family, n: int, m: int, op: str | None = None, variant: str = "monic",
                perturb: Perturbation | None = None, setting: Setting | None = None,
                closed_form: bool = True) -> IdentityReport:
    """Check both forms of the master identity for one family, n and m."""
    op = op or family.operator
    size = n + m
    st = setting or build_setting(family, size, op)
    T = st.operator
    for k in range(m + n - 1):
        if st.omega(k) == 0:
            raise DegenerateMeasure(f"Omega_{k} vanishes for {family.spec_string()}")
    qmu = _perturbed_mu(st, perturb)
    s = _sign_of(perturb)

    # pseudo-orthogonal form
    P = [st.pseudo(k) for k in range(m + n)]
    lhs_h = det_poly(wronskian_matrix(T, P, n, m))
    C_h = Fraction(sign(comb2(n)))
    for j in range(n - 1):
        C_h *= st.omega(m + j)
    desc = det_poly(q_matrix(st, n, m, "descending", qmu))
    rhs_h = desc * (C_h * s)

    # normalized form with the family's own polynomials
    ps = [family.polynomial(k, variant) if op != "tmu" else family.generating(k) for k in range(m + n)]
    xi = [p.lc for p in ps]
    sigma = st.sigma
    om = st.omega(m - 1)
    om_asc = omega_ascending(st.mu, m)
    lhs = det_poly(wronskian_matrix(T, ps, n, m)) * om
    C = Fraction(sign(m * n + comb2(m)))
    for j in range(n):
        C *= xi[m + j] / sigma[m + j]
    asc = det_poly(q_matrix(st, n, m, "ascending", qmu))
    rhs = asc * (C * s)

    checks = {
        "pseudo_form": lhs_h == rhs_h,
        "omega_orderings_agree": om == om_asc,
        "row_reversal": asc == desc * sign(comb2(m)),
    }
    if op == "delta":
        checks["casorati_rows"] = det_poly(casorati_matrix(ps, n, m)) * om == lhs
    if closed_form:
        closed = [[closed_q(family, op, k, j) for j in range(m)] for k in range(n, n + m)]
        if all(c is not None for row in closed for c in row):
            checks["closed_form_q"] = all(
                closed[r][j] == st.q(n + r, j) for r in range(m) for j in range(m))
    constants = {"Omega_m_minus_1": om, "C_pseudo": C_h * s, "C_normalized": C * s}
    return IdentityReport("main", family.name, n, m, lhs, rhs, constants, dict(family.params), checks)


# quadratic lattice ----------------------------------------------------------


@dataclass
class QuadraticSetting:
    family: QuadraticFamily
    n: int
    m: int
    u: Fraction
    fs: tuple[Poly, ...]
    mu: list[list[Fraction]]

    def s(self, j: int) -> Poly:
        return s_quadratic(j, self.u, self.m, self.n)

    def q(self, k: int, i: int, mu=None) -> Poly:
        mu = self.mu if mu is None else mu
        out = Poly()
        for j in range(k + 1):
            if mu[i][j]:
                out = out + self.s(k - j) * mu[i][j]
        return out

    def omega(self, k: int) -> Fraction:
        return omega(self.mu, k)

    def pseudo(self, k: int) -> Poly:
        """p_k in the lattice variable (bordered by f_k)."""
        return bordered_pseudo(self.mu, self.fs, k)


def build_quadratic_setting(family: QuadraticFamily, n: int, m: int) -> QuadraticSetting:
    u = family.u
    size = n + m
    L = family.functional()
    fs = tuple(f_poly(j, u) for j in range(size + 1))
    mu = [[L(fs[j] * fs[i]) for j in range(size + 1)] for i in range(size + 1)]
    return QuadraticSetting(family, n, m, u, fs, mu)


def _shift_poch_product(u, n: int, m: int, perturb=None) -> tuple[Poly, Poly]:
    """prod_{j=1}^{n-1} (2x+u+j)_j and prod_{j=1}^{m-1} (2x+u+j+n-m)_j."""
    num = ONE
    for j in range(1, n):
        num = num * pochhammer(Poly.linear(2, u + j), j + _poch_shift(perturb, j))
    den = ONE
    for j in range(1, m):
        den = den * pochhammer(Poly.linear(2, u + j + n - m), j)
    return num, den


def verify_quadratic(family: QuadraticFamily, n: int, m: int,
                     perturb: Perturbation | None = None) -> IdentityReport:
    """Both forms of the quadratic-lattice identity, with exact Pochhammer division."""
    qs = build_quadratic_setting(family, n, m)
    u = qs.u
    lam = lattice_lambda(u)
    for k in range(m + n - 1):
        if qs.omega(k) == 0:
            raise DegenerateMeasure(f"Omega_{k} vanishes for {family.spec_string()}")
    delta = operator_from_name("delta")
    qmu = _perturbed_mu(qs, perturb)
    s = _sign_of(perturb)
    K = n + m - 1
    qdet = det_poly([[qs.q(K, j, qmu).shift(-i) for j in range(m)] for i in range(m)])
    num, den = _shift_poch_product(u, n, m, perturb)
    checks = {}

    P = [qs.pseudo(k).compose(lam) for k in range(m + n)]
    lhs_h = det_poly(wronskian_matrix(delta, P, n, m))
    om_prod = Fraction(1)
    for j in range(n - 1):
        om_prod *= qs.omega(m + j)
    try:
        rhs_h = (num * qdet * (om_prod * sign(comb2(m)) * s)).exact_div(den)
        checks["pseudo_form"] = lhs_h == rhs_h
    except ArithmeticError:
        checks["pseudo_form"] = False

    ps = [family.lattice_monic(k) for k in range(m + n)]
    xi = [p.lc for p in ps]
    om = qs.omega(m - 1)
    lhs = det_poly(wronskian_matrix(delta, [p.compose(lam) for p in ps], n, m)) * om
    D = Fraction(factorial(m)) * xi[m] * sign(comb2(m)) * s
    for j in range(1, n):
        D *= factorial(m + j) * xi[m + j]
    try:
        rhs = (num * qdet * D).exact_div(den)
    except ArithmeticError:
        rhs = None
        checks["exact_division"] = False
    if rhs is None:
        rhs = lhs + 1
    if m:
        checks["closed_form_q"] = all(q_quadratic_closed(family, n, m, i) == qs.q(K, i) for i in range(m))
    constants = {"Omega_m_minus_1": om, "D_scalar": D, "u": u}
    return IdentityReport("quadratic", family.name, n, m, lhs, rhs, constants, dict(family.params), checks)


# lemma identities on the quadratic lattice ---------------------------------------


def lemma_r_is_f_of_lambda(k: int, u) -> bool:
    return r_quadratic(k, u) == f_poly(k, u).compose(lattice_lambda(u))


def lemma_delta_power(l: int, k: int, u) -> bool:
    """Delta^l r^u_k = (-1)^l sum_j (-1)^j/j! (l+1-2j)_{2j} (2x+u+l)_{l-2j} r^{u+l-j}_{k-l+j}."""
    u = Fraction(u)
    lhs = r_quadratic(k, u)
    for _ in range(l):
        lhs = lhs.forward_difference()
    rhs = Poly()
    for j in range(l // 2 + 1):
        c = Fraction(sign(j), factorial(j)) * pochhammer(Fraction(l + 1 - 2 * j), 2 * j)
        term = pochhammer(Poly.linear(2, u + l), l - 2 * j) * r_quadratic(k - l + j, u + l - j)
        rhs = rhs + term * c
    return lhs == rhs * sign(l)


def lemma_nabla_s(k: int, l: int, n: int, m: int, u) -> bool:
    """nabla s^{n-l+1}_{k+1} = (2x+u+m+n-l-2) s^{n-l}_k."""
    u = Fraction(u)
    lhs = s_quadratic(k + 1, u, m, n - l + 1).backward_difference()
    rhs = Poly.linear(2, u + m + n - l - 2) * s_quadratic(k, u, m, n - l)
    return lhs == rhs


def lemma_convolution(l: int, k: int, m: int, n: int, u) -> bool:
    """sum_{j=0}^{m+k} s^{n+k-l}_j r^{u+n-1-l}_{m+k-j} = 0."""
    u = Fraction(u)
    total = Poly()
    for j in range(m + k + 1):
        total = total + s_quadratic(j, u, m, n + k - l) * r_quadratic(m + k - j, u + n - 1 - l)
    return total.is_zero()


def verify_fkm_identities(u, bound: int = 4) -> bool:
    """f_{j,i-l} f_j = binom(j+i-l, j) f_{j+i-l} and the expansion of f_i on f_{j,i-l}."""
    from .arith import binom

    u = Fraction(u)
    for i in range(bound + 1):
        for j in range(bound + 1):
            for l in range(i + 1):
                if f_km(j, i - l, u) * f_poly(j, u) != f_poly(j + i - l, u) * binom(j + i - l, j):
                    return False
            rhs = Poly()
            for l in range(min(i, j) + 1):
                rhs = rhs + f_km(j, i - l, u) * (sign(l) * binom(j, l) * pochhammer(u + i + j - l, l))
            if rhs != f_poly(i, u):
                return False
    return True


# structural checks ------------------------------------------------------------


def omega_product_formula(st: Setting, norms: Sequence[Fraction], k: int) -> Fraction:
    """(-1)^{k(k+1)/2} prod_{j<=k} sigma_j upsilon_j ||p_j||^2."""
    out = Fraction(sign(k * (k + 1) // 2))
    for j in range(k + 1):
        out *= st.sigma[j] * st.upsilon[j] * norms[j]
    return out


def toeplitz_det(ss: Sequence[Poly], n: int, m: int) -> Poly:
    """det(s_{n+i-j})_{i,j=1}^m with s_k = 0 for k < 0."""
    def s(k):
        return ss[k] if 0 <= k < len(ss) else Poly()
    return det_poly([[s(n + i - j) for j in range(m)] for i in range(m)])
