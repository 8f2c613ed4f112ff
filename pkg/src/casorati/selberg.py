"""Vandermonde-squared sums over finite measures and the Selberg-type identities.

Sums run over m-tuples of support points of a discrete measure.  Since the
squared Vandermonde vanishes on repeated points and the integrands are
symmetric, enumeration is over strictly increasing index tuples and the
result is multiplied by m!.  The naive sum over all tuples is kept as an
oracle for small instances.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .arith import IndexOutOfRange, Q, comb2, pochhammer, sign
from .detcore import IdentityReport, Perturbation, _sign_of, det
from .families import DiscreteMeasure, Family, Racah, jacobi_monic_norm
from .operators import operator_from_name
from .poly import ONE, X, Poly, expand_in_basis

GUARD = 10**7


def _check_guard(size: int, m: int) -> None:
    if size**m > GUARD:
        raise IndexOutOfRange(f"enumeration of {size}^{m} tuples exceeds the guard {GUARD}")


def vandermonde(xs: Sequence) -> Fraction:
    """prod_{i<j} (x_i - x_j)."""
    out = Fraction(1)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[i] - xs[j]
    return out


def brute_force_sum(measure: DiscreteMeasure, m: int, factor: Poly | Callable | None = None) -> Fraction:
    """sum over m-tuples of Lambda^2(x) prod_j factor(x_j) w(x_j).

    Depth-first over increasing tuples, carrying the running product of
    squared differences and weights.
    """
    if m == 0:
        return Fraction(1)
    pts = measure.points
    _check_guard(len(pts), m)
    f = (lambda x: Fraction(1)) if factor is None else factor
    vals = [w * f(x) for x, w in measure.support]
    S = len(pts)
    total = Fraction(0)

    def walk(start: int, chosen: list[int], acc: Fraction) -> None:
        nonlocal total
        if len(chosen) == m:
            total += acc
            return
        for k in range(start, S - (m - len(chosen) - 1)):
            v = vals[k]
            if v == 0:
                continue
            xk = pts[k]
            prod = acc * v
            for c in chosen:
                d = xk - pts[c]
                prod *= d * d
            if prod:
                chosen.append(k)
                walk(k + 1, chosen, prod)
                chosen.pop()

    walk(0, [], Fraction(1))
    return total * factorial(m)


def naive_sum(measure: DiscreteMeasure, m: int, integrand: Callable[[tuple], Fraction]) -> Fraction:
    """sum over all m-tuples of integrand(x) prod w(x_j); the oracle."""
    _check_guard(len(measure.support), m)
    total = Fraction(0)
    for combo in itertools.product(measure.support, repeat=m):
        xs = tuple(x for x, _ in combo)
        w = Fraction(1)
        for _, wj in combo:
            w *= wj
        total += integrand(xs) * w
    return total


def hankel_det(moment: Callable[[int], Fraction], m: int) -> Fraction:
    return det([[moment(i + j) for j in range(m)] for i in range(m)])


def heine_route(functional: Callable[[Poly], Fraction], m: int, weight: Poly = ONE) -> Fraction:
    """m! det(L(x^{i+j} w)) = sum Lambda^2 prod w(x_j) dmu, for any functional L."""
    return factorial(m) * det([[functional(X ** (i + j) * weight) for j in range(m)] for i in range(m)])


# Theorem on Selberg-type sums ----------------------------------------------------


def r_anchored(op: str, n: int, u) -> Poly:
    """r_{n,u}: (x-u)^n/n! for the derivative, binom(x-u, n) for Delta."""
    u = Q(u)
    if op == "derivative":
        return (X - u) ** n * Fraction(1, factorial(n))
    if op == "delta":
        return Poly.binomial(n, -u)
    raise ValueError(f"unknown operator {op!r}")


def tise_constant(sigmas: Sequence[Fraction], norms: Sequence[Fraction], n: int, m: int) -> Fraction:
    """(-1)^{mn} m! sigma_n^m prod_{j<m} ||p_j||^2 prod_{j<n} sigma_j."""
    c = Fraction(sign(m * n) * factorial(m)) * sigmas[n] ** m
    for j in range(m):
        c *= norms[j]
    for j in range(n):
        c *= sigmas[j]
    return c


def _monic_and_norms(family: Family, upto: int, measure: DiscreteMeasure | None):
    lattice = getattr(family, "lattice", "linear") == "quadratic"
    monic = [family.lattice_monic(k) if lattice else family.monic(k) for k in range(upto + 1)]
    if measure is not None:
        norms = [measure.inner(p, p) for p in monic]
    else:
        norms = [family.norm_squared(k) for k in range(upto + 1)]
    return monic, norms


def verify_tise(family: Family, op: str, n: int, m: int, u, measure: DiscreteMeasure | None = None,
                perturb: Perturbation | None = None) -> IdentityReport:
    """Vandermonde-squared sum of r_{n,u} against the Wronskian of monic polynomials at u."""
    u = Q(u)
    if measure is None and family.support_size() is not None:
        measure = family.measure()
    T = operator_from_name(op)
    r = r_anchored(op, n, u)
    monic, norms = _monic_and_norms(family, m + n, measure)
    if measure is not None:
        S = len(measure.support)
        if m + n - 1 > S:
            raise IndexOutOfRange(f"m+n-1 = {m + n - 1} exceeds the support size {S}")
        lhs = brute_force_sum(measure, m, r)
        via_heine = heine_route(lambda p: measure.integrate(p), m, r)
    else:
        L = family.functional()
        lhs = heine_route(L, m, r)
        via_heine = lhs
    sigmas = [Fraction(1, factorial(k)) for k in range(n + 1)]
    C = tise_constant(sigmas, norms, n, m) * _sign_of(perturb)
    rows = []
    for i in range(n):
        rows.append([T.power(monic[m + j], i)(u) for j in range(n)])
    rhs = C * det(rows)
    checks = {"heine_route": via_heine == lhs}
    constants = {"C": C, "u": u, "op": op}
    return IdentityReport("tise", family.name, n, m, lhs, rhs, constants, dict(family.params), checks)


def verify_tise_corollary(family: Family, which: int, n: int, m: int, u,
                          measure: DiscreteMeasure | None = None) -> IdentityReport:
    """The power (which=1) or falling-factorial (which=2) integrand forms."""
    u = Q(u)
    if measure is None:
        measure = family.measure()
    if which == 1:
        integrand, op = (X - u) ** n, "derivative"
    else:
        integrand, op = pochhammer(X - u - n + 1, n), "delta"
    T = operator_from_name(op)
    monic, norms = _monic_and_norms(family, m + n, measure)
    lhs = brute_force_sum(measure, m, integrand)
    C = Fraction(sign(m * n) * factorial(m))
    for j in range(m):
        C *= norms[j]
    for j in range(n):
        C /= factorial(j)
    rhs = C * det([[T.power(monic[m + j], i)(u) for j in range(n)] for i in range(n)])
    return IdentityReport(f"tise-corollary-{which}", family.name, n, m, lhs, rhs, {"C": C, "u": u},
                          dict(family.params))


def verify_llhi(measure: DiscreteMeasure, psi: Sequence[Poly], s: Callable[[tuple], Fraction], m: int) -> bool:
    """Symmetrization lemma: Lambda prod psi_{j-1}(x_j) may be replaced by a multiple of Lambda^2."""
    _check_guard(len(measure.support), m)
    lhs = Fraction(0)
    rhs = Fraction(0)
    for combo in itertools.permutations(measure.support, m):
        xs = tuple(x for x, _ in combo)
        w = Fraction(1)
        for _, wj in combo:
            w *= wj
        lam = vandermonde(xs)
        sv = s(xs) * w
        prod = Fraction(1)
        for j, x in enumerate(xs):
            prod *= psi[j](x)
        lhs += sv * lam * prod
        rhs += sv * lam * lam
    c = Fraction(sign(comb2(m)), factorial(m))
    for j in range(m):
        c *= psi[j].lc
    return lhs == c * rhs


def node_basis(nodes: Sequence, sigmas: Sequence, upto: int) -> list[Poly]:
    """r_0 = 1, r_k = sigma_k prod_{j<=k} (x - a_j)."""
    if len(nodes) < upto or len(sigmas) <= upto:
        raise IndexOutOfRange(f"need {upto} nodes and {upto + 1} sigmas")
    rs = [ONE]
    for k in range(1, upto + 1):
        rs.append(Poly.from_roots([Q(a) for a in nodes[:k]], Q(sigmas[k])))
    return rs


def verify_corf(family: Family, nodes: Sequence, sigmas: Sequence, n: int, m: int,
                measure: DiscreteMeasure | None = None) -> IdentityReport:
    """Vandermonde-squared sum of a node-product r_n against det(theta^{m+j-1}_{i-1})."""
    if Q(sigmas[0]) != 1 or any(Q(s) == 0 for s in sigmas):
        raise ValueError("need sigma_0 = 1 and nonzero sigma_n")
    if measure is None:
        measure = family.measure()
    rs = node_basis(nodes, sigmas, m + n)
    monic, norms = _monic_and_norms(family, m + n, measure)
    theta = [expand_in_basis(p, rs) for p in monic]
    lhs = brute_force_sum(measure, m, rs[n])
    C = tise_constant([Q(s) for s in sigmas], norms, n, m)
    rhs = C * det([[theta[m + j][i] for j in range(n)] for i in range(n)])
    return IdentityReport("corf", family.name, n, m, lhs, rhs, {"C": C}, dict(family.params))


# continuous and Racah closed forms ------------------------------------------------


def jacobi_selberg_ratio(alpha, beta, m: int) -> Fraction:
    """Selberg integral at gamma=1 over (int x^{a-1}(1-x)^{b-1} dx)^m, as a Pochhammer product."""
    a, b = Q(alpha), Q(beta)
    out = Fraction(1)
    for j in range(m):
        out *= pochhammer(a, j) * pochhammer(b, j) * factorial(j + 1) / pochhammer(a + b, m + j - 1)
    return out


def beta_moment(alpha, beta, k: int) -> Fraction:
    a, b = Q(alpha), Q(beta)
    return pochhammer(a, k) / pochhammer(a + b, k)


def verify_jacobi_selberg_gamma1(alpha, beta, m: int) -> IdentityReport:
    """Gamma-product side vs m! prod ||p_j||^2 for the Beta weight on [0,1]."""
    a, b = Q(alpha), Q(beta)
    lhs = jacobi_selberg_ratio(a, b, m)
    # x in [0,1] is (1+t)/2 with t carrying the Jacobi weight (1-t)^{b-1}(1+t)^{a-1}
    rhs = Fraction(factorial(m))
    for j in range(m):
        rhs *= jacobi_monic_norm(j, b - 1, a - 1) / 4**j
    hankel = factorial(m) * hankel_det(lambda k: beta_moment(a, b, k), m)
    return IdentityReport("jacobi-selberg", "jacobi", 0, m, lhs, rhs, {"alpha": a, "beta": b},
                          {"alpha": a, "beta": b}, {"heine_hankel": hankel == rhs})


def _pp(args: Sequence, k: int) -> Fraction:
    out = Fraction(1)
    for v in args:
        out *= pochhammer(v, k)
    return out


def racah_display_sum(N: int, beta, gamma, delta, n: int, m: int) -> Fraction:
    be, ga, de = Q(beta), Q(gamma), Q(delta)
    u = ga + de + 1
    lam = Poly((0, u, 1))
    pts, vals = [], []
    for x in range(n, N + 1):
        num = _pp([Fraction(-N), be + de + 1, ga + 1, (u + 2) / 2], x) * pochhammer(u, x + n)
        den = _pp([N + u + 1, -be + ga + 1, u / 2, de + 1], x) * factorial(x - n)
        pts.append(lam(x))
        vals.append(num / den)
    return brute_force_sum(DiscreteMeasure(tuple(zip(pts, vals))), m)


def racah_display_product(N: int, beta, gamma, delta, n: int, m: int) -> Fraction:
    be, ga, de = Q(beta), Q(gamma), Q(delta)
    fam = Racah.from_N(N, be, ga, de)
    out = Fraction(sign(m * n)) * fam.mass_M() ** m
    for j in range(m):
        out *= factorial(j + 1) * _pp([be - ga - N, -de - N, be + 1], j) * _pp([Fraction(-N), be + de + 1, ga + 1], n + j)
        out /= pochhammer(be - N + 1, 2 * j) * pochhammer(be - N + j, j) * pochhammer(be - N + m + j, n)
    return out


def racah_theta_det(fam: Racah, n: int, m: int) -> Fraction:
    """(-1)^{mn} prod_{j<n} j!/((m+j)! sigma_{m+j} (beta+m+j-N)_m)."""
    out = Fraction(sign(m * n))
    for j in range(n):
        out *= Fraction(factorial(j), factorial(m + j)) / (fam.sigma(m + j) * pochhammer(fam.beta + m + j - fam.N, m))
    return out


def verify_racah_selberg(N: int, beta, gamma, delta, n: int, m: int) -> IdentityReport:
    if (N - n + 1) ** m > GUARD:
        raise IndexOutOfRange("racah sum exceeds the enumeration guard")
    fam = Racah.from_N(N, beta, gamma, delta)
    lhs = racah_display_sum(N, beta, gamma, delta, n, m)
    rhs = racah_display_product(N, beta, gamma, delta, n, m)
    checks = {}
    K = m + n - 1
    if 1 <= m and K <= N:
        # the node-basis route needs sigma_k and the monic polynomials up to degree m+n-1
        raw = fam.raw_measure()
        u = fam.u
        sig = [fam.sigma(k) for k in range(K + 1)]
        nodes = [(j - 1) * (u + j - 1) for j in range(1, K + 1)]
        rs = node_basis(nodes, sig, K)
        monic = [fam.monic(k) for k in range(K + 1)]
        norms = [fam.raw_norm_squared(k) for k in range(m)]
        theta = [expand_in_basis(p, rs) for p in monic]
        tdet = det([[theta[m + j][i] for j in range(n)] for i in range(n)])
        corf_lhs = brute_force_sum(raw, m, rs[n])
        corf_rhs = tise_constant(sig, norms, n, m) * tdet
        checks = {
            "corf": corf_lhs == corf_rhs,
            "theta_det_closed_form": tdet == racah_theta_det(fam, n, m),
            "display_sum_is_corf_sum": corf_lhs == lhs * sig[n] ** m,
            "norms_match_measure": all(raw.inner(monic[k], monic[k]) == norms[k] for k in range(m)),
        }
    return IdentityReport("racah-selberg", "racah", n, m, lhs, rhs, {"M": fam.mass_M()},
                          {"N": N, "beta": Q(beta), "gamma": Q(gamma), "delta": Q(delta)}, checks)
