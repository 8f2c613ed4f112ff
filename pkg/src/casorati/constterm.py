"""Constant terms of multivariate Laurent expansions.

The identities here all have the shape

    C.T. prod_j F(z_j) / z_j^D * P(z)

with F a power series in one variable and P a Laurent polynomial (a squared
Vandermonde, possibly times extra pair factors).  The constant term is taken
one variable at a time: each monomial z^e of P picks the coefficient of
z_j^{D - e_j} in F.  A plain LaurentPoly product is kept as an oracle.

The variable x sits in the exponents of the series, so it is fixed to a
rational number; identities polynomial in x are checked on a grid with more
points than the degree bound and the values are interpolated.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .arith import ForbiddenParameter, IndexOutOfRange, Q, comb2, pochhammer, sign
from .detcore import IdentityReport, Perturbation, _sign_of, det_poly
from .families import Charlier, Meixner, jacobi_homogenized, ultraspherical_poly
from .poly import Poly

TERM_GUARD = 2_000_000

Exps = tuple


class LaurentPoly:
    """Sparse Laurent polynomial in nvars variables over Q.

    ``window`` is an optional per-variable (lo, hi) range; products drop
    terms outside it.  Callers pass a window only when the dropped terms
    provably cannot reach the exponent they are after.
    """

    __slots__ = ("nvars", "terms", "window")

    def __init__(self, nvars: int, terms: dict | None = None, window: Sequence | None = None):
        self.nvars = nvars
        self.window = None if window is None else tuple((int(lo), int(hi)) for lo, hi in window)
        self.terms: dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has the wrong length")
            if c and self._inside(e):
                self.terms[e] = self.terms.get(e, Fraction(0)) + Fraction(c)
        self.terms = {e: c for e, c in self.terms.items() if c}

    def _inside(self, e: Exps) -> bool:
        if self.window is None:
            return True
        return all(lo <= k <= hi for k, (lo, hi) in zip(e, self.window))

    @classmethod
    def const(cls, nvars: int, c=1) -> LaurentPoly:
        return cls(nvars, {(0,) * nvars: Q(c)})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> LaurentPoly:
        return cls(len(exps), {tuple(exps): Q(c)})

    @classmethod
    def variable(cls, nvars: int, j: int, power: int = 1) -> LaurentPoly:
        e = [0] * nvars
        e[j] = power
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def univariate(cls, nvars: int, j: int, coeffs: Sequence, shift: int = 0) -> LaurentPoly:
        """sum_k coeffs[k] z_j^{k + shift}."""
        out = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * nvars
                e[j] = k + shift
                out[tuple(e)] = Q(c)
        return cls(nvars, out)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(self.nvars, out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def scale(self, c) -> LaurentPoly:
        c = Q(c)
        return LaurentPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, self.window)

    def mul(self, other: LaurentPoly, window: Sequence | None = None) -> LaurentPoly:
        if len(self.terms) * len(other.terms) > TERM_GUARD:
            raise IndexOutOfRange("Laurent product exceeds the term guard")
        out: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.nvars, out, window)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def permute(self, perm: Sequence[int]) -> LaurentPoly:
        """Rename variable perm[k] to k."""
        return LaurentPoly(self.nvars, {tuple(e[p] for p in perm): c for e, c in self.terms.items()})

    def exponent_range(self, j: int) -> tuple[int, int]:
        ks = [e[j] for e in self.terms]
        return (min(ks), max(ks)) if ks else (0, 0)

    def integrate_out(self, j: int, coeff: Callable[[int], Fraction], D: int) -> LaurentPoly:
        """Multiply by z_j^{-D} F(z_j) and keep the z_j^0 part; coeff(k) is [z^k]F."""
        out: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            k = D - e[j]
            if k < 0:
                continue
            v = coeff(k)
            if v:
                e2 = e[:j] + (0,) + e[j + 1:]
                out[e2] = out.get(e2, Fraction(0)) + c * v
        return LaurentPoly(self.nvars, out)


def vandermonde_squared(n: int) -> LaurentPoly:
    """prod_{i<j} (z_i - z_j)^2."""
    out = LaurentPoly.const(n)
    for i in range(n):
        for j in range(i + 1, n):
            d = LaurentPoly.variable(n, i) - LaurentPoly.variable(n, j)
            out = out * d * d
    return out


def pair_factor_ii(n: int) -> LaurentPoly:
    """prod_{i<j} (z_i - z_j)^2 (1 - 1/(z_i z_j))."""
    out = vandermonde_squared(n)
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i] = e[j] = -1
            out = out * (LaurentPoly.const(n) - LaurentPoly.monomial(e))
    return out


def dyson_product(n: int, k: int = 1) -> LaurentPoly:
    """prod_{i != j} (1 - z_i/z_j)^k."""
    out = LaurentPoly.const(n)
    for i in range(n):
        for j in range(n):
            if i != j:
                e = [0] * n
                e[i], e[j] = 1, -1
                f = LaurentPoly.const(n) - LaurentPoly.monomial(e)
                for _ in range(k):
                    out = out * f
    return out


def constant_term(L: LaurentPoly) -> Fraction:
    return L.constant_term()


# univariate series -----------------------------------------------------------


def series_power(f: Sequence, e, order: int) -> list[Fraction]:
    """Coefficients 0..order of f(z)^e for f(0) = 1 and rational e (Miller's recurrence)."""
    f = [Q(c) for c in f] + [Fraction(0)] * (order + 1)
    if f[0] != 1:
        raise ValueError("series_power needs f(0) = 1")
    e = Q(e)
    h = [Fraction(1)]
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if f[j]:
                acc += ((e + 1) * j - k) * f[j] * h[k - j]
        h.append(acc / k)
    return h[: order + 1]


def exp_series(t, order: int) -> list[Fraction]:
    """Coefficients of e^{t z}."""
    t = Q(t)
    return [t**k / factorial(k) for k in range(order + 1)]


def series_mul(a: Sequence, b: Sequence, order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


SERIES_KINDS = ("meixner", "charlier", "ultraspherical", "morris")


def expand_series(kind: str, order: int, x, **params) -> Poly:
    """Truncated generating function in z at a rational x.

    meixner: (1-z/a)^x (1-z)^{-x-c}; charlier: (1+z)^x e^{-az};
    ultraspherical: (1-2xz+z^2)^{-lam}; morris: (1-z/a)^x.
    """
    x = Q(x)
    kind = kind.lower()
    if kind in ("meixner", "morris"):
        a = Q(params["a"])
        if a == 0:
            raise ForbiddenParameter(f"{kind}: a must be nonzero")
        out = series_power([1, -1 / a], x, order)
        if kind == "meixner":
            out = series_mul(out, series_power([1, -1], -x - Q(params["c"]), order), order)
    elif kind == "charlier":
        a = Q(params["a"])
        if a == 0:
            raise ForbiddenParameter("charlier: a must be nonzero")
        out = series_mul(series_power([1, 1], x, order), exp_series(-a, order), order)
    elif kind == "ultraspherical":
        lam = Q(params["lam"])
        out = series_power([1, -2 * x, 1], -lam, order)
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return Poly(out)


def ct_engine(P: LaurentPoly, series: Sequence[Fraction], D: int) -> Fraction:
    """C.T. of P(z) prod_j z_j^{-D} F(z_j), one variable at a time."""
    if not P.terms:
        return Fraction(0)
    need = D - min((P.exponent_range(j)[0] for j in range(P.nvars)), default=0)
    if len(series) <= need:
        raise IndexOutOfRange(f"series has order {len(series) - 1}, need {need}")
    coeff = lambda k: series[k]
    L = P
    for j in range(P.nvars):
        L = L.integrate_out(j, coeff, D)
    return L.constant_term()


def needed_order(P: LaurentPoly, D: int) -> int:
    """Highest series coefficient that can reach the constant term."""
    if not P.terms:
        return 0
    return max(D - P.exponent_range(j)[0] for j in range(P.nvars))


def ct_oracle(P: LaurentPoly, series: Sequence[Fraction], D: int) -> Fraction:
    """Same constant term through plain LaurentPoly products."""
    n = P.nvars
    L = P
    for j in range(n):
        L = L * LaurentPoly.univariate(n, j, series, -D)
    return L.constant_term()


def _padded(kind: str, order: int, x, **params) -> list[Fraction]:
    coeffs = list(expand_series(kind, order, x, **params).coeffs)
    return coeffs + [Fraction(0)] * (order + 1 - len(coeffs))


def _ct(P: LaurentPoly, kind: str, x, D: int, audit: bool = True, **params) -> tuple[Fraction, bool]:
    """Constant term with the planned order, plus the audit at order + 2."""
    order = needed_order(P, D)
    value = ct_engine(P, _padded(kind, order, x, **params), D)
    ok = True
    if audit:
        ok = ct_engine(P, _padded(kind, order + 2, x, **params), D) == value
    return value, ok


# identity right-hand sides -----------------------------------------------------


def morris_k1_rhs(n: int, m: int, x: int, a) -> Fraction:
    a = Q(a)
    out = Fraction(sign(comb2(n) + m * n)) / a ** (m * n)
    for j in range(n):
        out *= Fraction(factorial(x + j) * factorial(j + 1), factorial(x - m + j) * factorial(m + j))
    return out


def meixner_rhs(n: int, m: int, a, c, perturb: Perturbation | None = None) -> Poly:
    """(-1)^{C(m,2)+C(n,2)+nm} n! a^{C(m,2)} det(m^{a,-c-n-i-j+3}_{n+i-1}(-x+j-1)), polynomial in x."""
    a, c = Q(a), Q(c)
    rows = [[Meixner(a=a, c=-c - n - i - j + 3).generating(n + i - 1).compose(Poly.linear(-1, j - 1))
             for j in range(1, m + 1)] for i in range(1, m + 1)]
    k = Fraction(sign(comb2(m) + comb2(n) + n * m) * factorial(n)) * a ** comb2(m) * _sign_of(perturb)
    return det_poly(rows) * k


def charlier_rhs(n: int, m: int, a, perturb: Perturbation | None = None) -> Poly:
    a = Q(a)
    fam = Charlier(a=-a)
    rows = [[fam.normalized(n + i - 1).compose(Poly.linear(-1, j - 1)) for j in range(1, m + 1)]
            for i in range(1, m + 1)]
    return det_poly(rows) * (sign(comb2(n) + n * m) * factorial(n) * _sign_of(perturb))


def _gegenbauer(k: int, lam) -> Poly:
    return ultraspherical_poly(k, lam) if k >= 0 else Poly()


def ultraspherical_i_rhs(n: int, m: int, lam, perturb: Perturbation | None = None) -> Poly:
    """(-1)^{C(n,2)+nm} n! det(C^{-lam}_{n+i-j}(x)), the Toeplitz reading."""
    lam = Q(lam)
    rows = [[_gegenbauer(n + i - j, -lam) for j in range(m)] for i in range(m)]
    return det_poly(rows) * (sign(comb2(n) + n * m) * factorial(n) * _sign_of(perturb))


def omega(n: int, m: int, lam) -> Fraction:
    """The x = 0 closed form, defined for n <= m."""
    if n > m:
        raise ValueError("omega(n, m, .) is defined for n <= m")
    lam = Q(lam)
    h = (m + 1) // 2
    out = Fraction(sign(n * h))
    for j in range(n):
        out *= Fraction(factorial(j // 2), factorial((m + j) // 2))
    for j in range(h):
        out *= (lam + j) ** min(n, m - 2 * j) * (lam - j - 1) ** max(n - 2 * j - 2, 0)
    return out


def ultraspherical_i_x0(n: int, m: int, lam) -> Fraction:
    lam = Q(lam)
    if (n * m) % 2:
        core = Fraction(0)
    elif n <= m:
        core = omega(n, m, lam)
    else:
        core = omega(m, n, -lam)
    return sign(comb2(n) + n * m) * factorial(n) * core


def ultraspherical_ii_matrix(n: int, m: int, lam) -> list[list[Poly]]:
    lam = Q(lam)
    half = Fraction(1, 2)
    return [[jacobi_homogenized(n + i - 1, 2 * lam + j - 1, -n - i - lam + half)
             * (1 / pochhammer(2 * lam + 2 * j - 1, n + i - j))
             for j in range(1, m + 1)] for i in range(1, m + 1)]


def ultraspherical_ii_rhs(n: int, m: int, lam, perturb: Perturbation | None = None) -> Poly:
    lam = Q(lam)
    k = Fraction(sign(n * m + comb2(m)) * factorial(n) * 2 ** (n * m + comb2(m)))
    for j in range(m):
        k *= pochhammer(lam, n + j) / pochhammer(2 * lam, j)
    return det_poly(ultraspherical_ii_matrix(n, m, lam)) * (k * _sign_of(perturb))


def ultraspherical_ii_x1(n: int, m: int, lam) -> Fraction:
    lam = Q(lam)
    num = Fraction(factorial(n) * 2 ** (2 * n * m + comb2(m)))
    for j in range(1, m):
        num *= (2 * lam + 2 * j - 1) ** (m - j)
    den = Fraction(1)
    for j in range(1, m // 2 + 1):
        den *= pochhammer(2 * lam + n + 2 * j - 1, (m - 1) // 2 + (m + 1) // 2)
    out = num / den
    for j in range(m):
        out *= (Fraction(factorial(j), factorial(n + j)) * pochhammer(lam, n + j) * pochhammer(lam + j + Fraction(1, 2), n)
                / (pochhammer(2 * lam, j) * pochhammer(2 * lam + 2 * j + 1, n)))
    return out


# side identities that feed the constant-term forms ------------------------------


def midu_check(n: int, m: int, a, c) -> bool:
    """det(Delta^{i-1} m^{a,c}_{m+j-1}) against the dual determinant, symbolic in x."""
    a, c = Q(a), Q(c)
    fam = Meixner(a=a, c=c)
    left = det_poly([[fam.generating(m + j).shift(i) for j in range(n)] for i in range(n)])
    rows = [[Meixner(a=a, c=-c - n - i - j + 3).generating(n + i - 1).compose(Poly.linear(-1, j - 1))
             for j in range(1, m + 1)] for i in range(1, m + 1)]
    C = Fraction(sign(n * m + comb2(m) + comb2(n))) * (1 - a) ** comb2(n) / a ** (comb2(n) - comb2(m))
    return left == det_poly(rows) * C


def chidu_check(n: int, m: int, a) -> bool:
    a = Q(a)
    cp, cm = Charlier(a=a), Charlier(a=-a)
    left = det_poly([[cp.normalized(m + j).shift(i) for j in range(n)] for i in range(n)])
    right = det_poly([[cm.normalized(n + i).compose(Poly.linear(-1, j)) for j in range(m)] for i in range(m)])
    return left == right * sign(n * m)


def idu_check(n: int, m: int, lam) -> bool:
    lam = Q(lam)
    left = det_poly([[_gegenbauer(m + j - i, lam) for j in range(n)] for i in range(n)])
    right = det_poly([[_gegenbauer(n + i - j, -lam) for j in range(m)] for i in range(m)])
    return left == right * sign(n * m)


def idu2_check(n: int, m: int, lam) -> bool:
    """Wronskian of C^lam_{m+j-1} against the homogenized Jacobi determinant."""
    lam = Q(lam)
    left = det_poly([[_deriv(ultraspherical_poly(m + j, lam), i) for j in range(n)] for i in range(n)])
    C = Fraction(sign(n * m + comb2(m)) * 2 ** comb2(n + m))
    for j in range(1, n + m):
        C *= pochhammer(lam, j)
    for j in range(1, m):
        C /= pochhammer(2 * lam, j)
    return left == det_poly(ultraspherical_ii_matrix(n, m, lam)) * C


def _deriv(p: Poly, k: int) -> Poly:
    for _ in range(k):
        p = p.derivative()
    return p


# verification ------------------------------------------------------------------


def _x_grid(bound: int, xs) -> list[Fraction]:
    if xs is not None:
        if not isinstance(xs, (list, tuple)):
            xs = [xs]
        return [Q(v) for v in xs]
    # rational nodes away from the integers, where nothing special happens
    return [Fraction(2 * k + 1, 3) for k in range(bound + 1)]


def _report(name: str, family: str, n: int, m: int, xs, lhs_vals, rhs: Poly, params, checks,
            constants=None) -> IdentityReport:
    if len(xs) == 1:
        lhs, rhs = Poly.const(lhs_vals[0]), Poly.const(rhs(xs[0]))
    else:
        lhs = Poly.interpolate(xs, lhs_vals)
        rhs = Poly.interpolate(xs, [rhs(v) for v in xs])
    consts = {"x_points": len(xs)}
    consts.update(constants or {})
    return IdentityReport(name, family, n, m, lhs, rhs, consts, params, checks)


def degree_bound(n: int, m: int) -> int:
    """Both sides are polynomials in x of degree at most nm + C(m,2)."""
    return n * m + comb2(m)


def verify_morris_k1(n: int, m: int, x: int, a) -> IdentityReport:
    a = Q(a)
    if a == 0:
        raise ForbiddenParameter("morris: a must be nonzero")
    if not (0 <= m <= x):
        raise ForbiddenParameter("morris: needs 0 <= m <= x")
    P = vandermonde_squared(n)
    D = m + n - 1
    lhs, audit = _ct(P, "morris", x, D, a=a)
    rhs = morris_k1_rhs(n, m, x, a)
    return IdentityReport("morris-k1", "meixner", n, m, lhs, rhs, {"D": D}, {"a": a, "x": Q(x)},
                          {"window_audit": audit})


def verify_dyson_k1(n: int) -> IdentityReport:
    lhs = dyson_product(n, 1).constant_term()
    return IdentityReport("dyson-k1", "dyson", n, 0, lhs, Fraction(factorial(n)), {}, {"k": 1})


def verify_ct_meixner(n: int, m: int, a, c, xs=None, pipeline: bool = False,
                      perturb: Perturbation | None = None) -> IdentityReport:
    a, c = Q(a), Q(c)
    if a in (0, 1):
        raise ForbiddenParameter("meixner: a must avoid 0 and 1")
    xs = _x_grid(degree_bound(n, m), xs)
    P = vandermonde_squared(n)
    D = m + n - 1
    # the integrand carries (1-z)^{-x-c-n+1}, the generating function with c shifted by n-1
    got = [_ct(P, "meixner", x, D, a=a, c=c + n - 1) for x in xs]
    rhs = meixner_rhs(n, m, a, c, perturb)
    checks = {"window_audit": all(ok for _, ok in got), "midu": midu_check(n, m, a, c)}
    if pipeline and n >= 1 and m >= 1:
        from .detcore import verify_main
        checks["main_pipeline"] = verify_main(Meixner(a=a, c=c), n, m).holds
    return _report("ct-meixner", "meixner", n, m, xs, [v for v, _ in got], rhs, {"a": a, "c": c}, checks)


def verify_ct_charlier(n: int, m: int, a, xs=None, perturb: Perturbation | None = None) -> IdentityReport:
    a = Q(a)
    if a == 0:
        raise ForbiddenParameter("charlier: a must be nonzero")
    xs = _x_grid(degree_bound(n, m), xs)
    P = vandermonde_squared(n)
    D = m + n - 1
    got = [_ct(P, "charlier", x, D, a=a) for x in xs]
    rhs = charlier_rhs(n, m, a, perturb)
    checks = {"window_audit": all(ok for _, ok in got), "chidu": chidu_check(n, m, a)}
    return _report("ct-charlier", "charlier", n, m, xs, [v for v, _ in got], rhs, {"a": a}, checks)


def ultraspherical_i_lhs(n: int, m: int, lam, x) -> Fraction:
    """C.T. side of the first ultraspherical identity; also defined at lam = 0."""
    P = vandermonde_squared(n)
    return _ct(P, "ultraspherical", x, m + n - 1, audit=False, lam=lam)[0]


def verify_ct_ultraspherical_I(n: int, m: int, lam, xs=None, perturb: Perturbation | None = None) -> IdentityReport:
    lam = Q(lam)
    if lam == 0:
        raise ForbiddenParameter("ultraspherical I: lam must be nonzero")
    xs = _x_grid(degree_bound(n, m), xs)
    P = vandermonde_squared(n)
    D = m + n - 1
    got = [_ct(P, "ultraspherical", x, D, lam=lam) for x in xs]
    rhs = ultraspherical_i_rhs(n, m, lam, perturb)
    at0 = _ct(P, "ultraspherical", 0, D, audit=False, lam=lam)[0]
    checks = {
        "window_audit": all(ok for _, ok in got),
        "idu": idu_check(n, m, lam),
        "x0_closed_form": ultraspherical_i_x0(n, m, lam) == rhs(0) == at0,
    }
    return _report("ct-ultraspherical-I", "ultraspherical", n, m, xs, [v for v, _ in got], rhs,
                   {"lam": lam}, checks)


def verify_ct_ultraspherical_II(n: int, m: int, lam, xs=None, perturb: Perturbation | None = None) -> IdentityReport:
    lam = Q(lam)
    if lam == 0 or (2 * lam).denominator == 1 and 2 * lam <= -1:
        raise ForbiddenParameter("ultraspherical II: lam must avoid 0, -1/2, -1, -3/2, ...")
    xs = _x_grid(degree_bound(n, m), xs)
    P = pair_factor_ii(n)
    D = m
    e = lam + n - 1
    got = [_ct(P, "ultraspherical", x, D, lam=e) for x in xs]
    rhs = ultraspherical_ii_rhs(n, m, lam, perturb)
    at1 = _ct(P, "ultraspherical", 1, D, audit=False, lam=e)[0]
    checks = {
        "window_audit": all(ok for _, ok in got),
        "idu2": idu2_check(n, m, lam),
        "x1_closed_form": ultraspherical_ii_x1(n, m, lam) == rhs(1) == at1,
    }
    return _report("ct-ultraspherical-II", "ultraspherical", n, m, xs, [v for v, _ in got], rhs,
                   {"lam": lam}, checks)


def symmetric_under_permutation(P: LaurentPoly, series: Sequence[Fraction], D: int, perm: Sequence[int]) -> bool:
    return ct_engine(P.permute(perm), series, D) == ct_engine(P, series, D)


def all_permutations(n: int):
    return itertools.permutations(range(n))
