"""Degree-lowering operators and the polynomial sequences attached to them.

For an operator T with deg T(p) = deg p - 1 the adapted basis (r_n) satisfies
r_0 = 1, deg r_n = n, T(r_n) = r_{n-1} and r_n(x0) = xi_n; the inverse sequence
(s_n) is its convolution inverse, sum_j s_j r_{n-j} = 0 for n >= 1.

The second half of the module holds the quadratic-lattice polynomials used with
Delta composed with lambda(x) = x(x+u).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .arith import DegenerateMeasure, IndexOutOfRange, Q, binom, pochhammer
from .poly import ONE, X, Poly, expand_in_basis


class LoweringOperator:
    """Linear map on polynomials lowering the degree by exactly one."""

    kind = "abstract"

    def apply(self, p: Poly) -> Poly:
        raise NotImplementedError

    def __call__(self, p: Poly) -> Poly:
        return self.apply(p)

    def power(self, p: Poly, k: int) -> Poly:
        for _ in range(k):
            p = self.apply(p)
        return p

    def describe(self) -> str:
        return self.kind


class Derivative(LoweringOperator):
    kind = "derivative"

    def apply(self, p: Poly) -> Poly:
        return p.derivative()


class ForwardDifference(LoweringOperator):
    kind = "delta"

    def apply(self, p: Poly) -> Poly:
        return p.forward_difference()


class BasisLowering(LoweringOperator):
    """T(p_n) = p_{n-1}, T(p_0) = 0, for an explicitly stored basis p_0..p_N."""

    kind = "basis"

    def __init__(self, basis: Sequence[Poly], label: str = "basis"):
        for k, b in enumerate(basis):
            if b.degree != k:
                raise ValueError(f"basis element {k} has degree {b.degree}")
        self.basis = tuple(basis)
        self.label = label

    def apply(self, p: Poly) -> Poly:
        if p.degree >= len(self.basis):
            raise IndexOutOfRange(
                f"degree {p.degree} exceeds stored basis degree {len(self.basis) - 1}"
            )
        coeffs = expand_in_basis(p, self.basis)
        out = Poly()
        for k in range(1, len(coeffs)):
            if coeffs[k]:
                out = out + self.basis[k - 1] * coeffs[k]
        return out

    def describe(self) -> str:
        return f"basis:{self.label}"


def operator_from_name(name: str, basis: Sequence[Poly] | None = None) -> LoweringOperator:
    name = name.lower()
    if name in ("d", "derivative", "d/dx", "ddx"):
        return Derivative()
    if name in ("delta", "forward_difference", "fd"):
        return ForwardDifference()
    if name in ("basis", "tmu", "t_mu"):
        if basis is None:
            raise ValueError("basis lowering operator needs a basis")
        return BasisLowering(basis)
    raise ValueError(f"unknown operator {name!r}")


@dataclass(frozen=True)
class AdaptedBasis:
    rs: tuple[Poly, ...]
    x0: Fraction
    anchor_values: tuple[Fraction, ...]

    @property
    def sigma(self) -> tuple[Fraction, ...]:
        return tuple(r.lc for r in self.rs)

    def __len__(self) -> int:
        return len(self.rs)

    def __getitem__(self, n: int) -> Poly:
        return self.rs[n]


@dataclass(frozen=True)
class InverseSequence:
    ss: tuple[Poly, ...]

    def __len__(self) -> int:
        return len(self.ss)

    def __getitem__(self, n: int) -> Poly:
        if n < 0:
            return Poly()
        return self.ss[n]


def build_adapted_basis(T: LoweringOperator, x0, anchor_values: Sequence, N: int) -> AdaptedBasis:
    """r_0..r_N with T(r_n) = r_{n-1} and r_n(x0) = anchor_values[n-1].

    Follows the recursion: write T((x-x0)^{n+1}) = sum_j alpha_j r_j and set
    r_{n+1} = ((x-x0)^{n+1} - sum_{j<n} alpha_j (r_{j+1} - xi_{j+1})) / alpha_n + xi_{n+1}.
    """
    x0 = Q(x0)
    xi = [Q(v) for v in anchor_values]
    if len(xi) < N:
        raise IndexOutOfRange(f"need {N} anchor values, got {len(xi)}")
    rs = [ONE]
    shifted = X - x0
    power = ONE
    for n in range(N):
        power = power * shifted
        image = T.apply(power)
        if image.degree != n:
            raise DegenerateMeasure(
                f"T lowers (x-x0)^{n + 1} to degree {image.degree}, expected {n}"
            )
        alpha = expand_in_basis(image, rs)
        if alpha[n] == 0:
            raise DegenerateMeasure(f"alpha_{n} vanishes")
        acc = power
        for j in range(n):
            if alpha[j]:
                acc = acc - (rs[j + 1] - xi[j]) * alpha[j]
        rs.append(acc / alpha[n] + xi[n])
    return AdaptedBasis(tuple(rs), x0, tuple(xi[:N]))


def build_inverse_sequence(basis: AdaptedBasis | Sequence[Poly]) -> InverseSequence:
    rs = basis.rs if isinstance(basis, AdaptedBasis) else tuple(basis)
    if rs[0] != 1:
        raise ValueError("r_0 must be 1")
    ss = [ONE]
    for n in range(1, len(rs)):
        acc = Poly()
        for j in range(n):
            acc = acc + ss[j] * rs[n - j]
        ss.append(-acc)
    return InverseSequence(tuple(ss))


def taylor_basis(x0, N: int) -> AdaptedBasis:
    """r_n = (x-x0)^n/n!, the derivative basis anchored at zero values."""
    return build_adapted_basis(Derivative(), x0, [0] * N, N)


def binomial_basis(N: int, u=0) -> AdaptedBasis:
    """r_n = binom(x-u, n), the Delta basis vanishing at u."""
    return build_adapted_basis(ForwardDifference(), u, [0] * N, N)


# quadratic lattice -------------------------------------------------------


def lattice_lambda(u) -> Poly:
    """lambda(x) = x(x+u)."""
    return Poly((0, Q(u), 1))


def f_km(k: int, m: int, u) -> Poly:
    """f_{k,m}(X) = (-1)^m/m! prod_{i=k}^{k+m-1} (X - i(u+i))."""
    u = Q(u)
    lead = Fraction((-1) ** m, factorial(m))
    return Poly.from_roots([i * (u + i) for i in range(k, k + m)], lead)


def f_poly(j: int, u) -> Poly:
    """f_j = f_{0,j}, polynomial of degree j in the lattice variable."""
    return f_km(0, j, u)


def r_quadratic(j: int, u) -> Poly:
    """r_j(x) = (-x)_j (x+u)_j / j!, degree 2j in x."""
    u = Q(u)
    return pochhammer(-X, j) * pochhammer(X + u, j) * Fraction(1, factorial(j))


def s_quadratic(j: int, u, m: int, n: int) -> Poly:
    """s_j(x) = (x)_j binom(x+u+n+m-2, j)."""
    if j < 0:
        return Poly()
    u = Q(u)
    return pochhammer(X, j) * binom(X + (u + n + m - 2), j)
