"""Classical orthogonal families with exact rational parameters.

Every measure is rescaled to total mass one; the transcendental factor that
was divided out (e^a, Gamma(c), Gamma-ratios, ...) is recorded in
``normalization_note``.  Norms and moments use the same scaling, so identities
homogeneous in the moments are unaffected.

Linear-lattice families (Charlier, Meixner, Krawtchouk, Hahn) pair with the
forward difference and the binomial basis binom(x, k).  Jacobi and Laguerre
pair with d/dx and powers of (x - x0).  Dual Hahn and Racah live on the
quadratic lattice lambda(x) = x(x+u): their polynomials are in the lattice
variable and their moment basis is f_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

from .arith import (
    DegenerateMeasure,
    ForbiddenParameter,
    IndexOutOfRange,
    Q,
    binom,
    is_nonpositive_integer,
    is_positive_integer,
    pochhammer,
    sign,
)
from .operators import f_poly, lattice_lambda
from .poly import ONE, X, Poly, expand_in_basis

ONE_Q = Fraction(1)


@dataclass(frozen=True)
class DiscreteMeasure:
    support: tuple[tuple[Fraction, Fraction], ...]
    normalization_note: str = ""

    @property
    def points(self) -> list[Fraction]:
        return [p for p, _ in self.support]

    @property
    def weights(self) -> list[Fraction]:
        return [w for _, w in self.support]

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.support), Fraction(0))

    def integrate(self, p: Poly | Callable) -> Fraction:
        return sum((w * p(x) for x, w in self.support), Fraction(0))

    def inner(self, p: Poly, q: Poly) -> Fraction:
        return sum((w * p(x) * q(x) for x, w in self.support), Fraction(0))

    def moment(self, k: int) -> Fraction:
        return sum((w * x**k for x, w in self.support), Fraction(0))

    def scaled(self, factor) -> DiscreteMeasure:
        factor = Q(factor)
        return DiscreteMeasure(
            tuple((x, w * factor) for x, w in self.support), self.normalization_note
        )


def normalize_mass(points: Sequence, weights: Sequence, note: str) -> DiscreteMeasure:
    total = sum(weights, Fraction(0))
    if total == 0:
        raise DegenerateMeasure("measure has zero total mass")
    return DiscreteMeasure(tuple((Q(x), Q(w) / total) for x, w in zip(points, weights)), note)


class Functional:
    """Linear functional on polynomials fixed by its values on a graded basis."""

    def __init__(self, basis: Callable[[int], Poly], value: Callable[[int], Fraction],
                 expander: Callable[[Poly], list] | None = None, label: str = ""):
        self._basis = lru_cache(maxsize=None)(basis)
        self._value = lru_cache(maxsize=None)(value)
        self._expander = expander
        self.label = label

    def basis(self, k: int) -> Poly:
        return self._basis(k)

    def value(self, k: int) -> Fraction:
        return self._value(k)

    def __call__(self, p: Poly) -> Fraction:
        if p.is_zero():
            return Fraction(0)
        if self._expander is not None:
            coeffs = self._expander(p)
        else:
            coeffs = expand_in_basis(p, [self._basis(k) for k in range(p.degree + 1)])
        return sum((c * self._value(k) for k, c in enumerate(coeffs) if c), Fraction(0))


def binomial_functional(value: Callable[[int], Fraction], label: str) -> Functional:
    return Functional(Poly.binomial, value, lambda p: p.to_binomial_basis(), label)


def taylor_functional(x0, value: Callable[[int], Fraction], label: str) -> Functional:
    x0 = Q(x0)
    return Functional(lambda k: (X - x0) ** k, value, lambda p: list(p.shift(x0).coeffs), label)


class Family:
    """Base class; subclasses fill in the closed forms."""

    name = "family"
    param_names: tuple[str, ...] = ()
    lattice = "linear"
    operator = "delta"
    x0 = Fraction(0)

    def __init__(self, **params):
        missing = set(self.param_names) - set(params)
        if missing:
            raise ForbiddenParameter(f"{self.name}: missing parameters {sorted(missing)}")
        self.params = {k: Q(params[k]) for k in self.param_names}
        for k, v in self.params.items():
            setattr(self, k, v)
        self._validate()
        self._monic_cache: dict[int, Poly] = {}

    def _validate(self) -> None:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(f'{k}={v}' for k, v in self.params.items())})"

    def spec_string(self) -> str:
        return f"{self.name}:" + ",".join(f"{k}={v}" for k, v in self.params.items())

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.params == other.params

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(self.params.items())))

    def with_params(self, **changes) -> Family:
        p = dict(self.params)
        p.update(changes)
        return type(self)(**p)

    # polynomials -------------------------------------------------------

    def monic(self, n: int) -> Poly:
        if n not in self._monic_cache:
            self._monic_cache[n] = self._monic(n)
        return self._monic_cache[n]

    def _monic(self, n: int) -> Poly:
        raise NotImplementedError

    def normalized(self, n: int) -> Poly:
        return self.monic(n) * Fraction(1, factorial(n))

    def polynomial(self, n: int, variant: str = "monic") -> Poly:
        if n < 0:
            return Poly()
        variant = variant.lower()
        if variant == "monic":
            return self.monic(n)
        if variant == "normalized":
            return self.normalized(n)
        if variant == "generating":
            return self.generating(n)
        raise ValueError(f"unknown variant {variant!r}")

    def generating(self, n: int) -> Poly:
        return self.normalized(n)

    # moments and measure -----------------------------------------------

    def moment(self, k: int) -> Fraction:
        """mu^0_k = L(basis_k) for the family's reference basis."""
        raise NotImplementedError

    def functional(self) -> Functional:
        raise NotImplementedError

    def norm_squared(self, n: int) -> Fraction:
        """Squared norm of the monic polynomial under the mass-one functional."""
        raise NotImplementedError

    def measure(self, truncation: int | None = None) -> DiscreteMeasure:
        raise NotImplementedError(f"{self.name} has no discrete measure")

    def support_size(self) -> int | None:
        return None


# linear lattice -----------------------------------------------------------


class Charlier(Family):
    name = "charlier"
    param_names = ("a",)

    def _validate(self):
        if self.a == 0:
            raise ForbiddenParameter("charlier: a must be nonzero")

    def _monic(self, n):
        a = self.a
        p = Poly()
        for j in range(n + 1):
            p = p + Poly.binomial(j) * ((-a) ** (n - j) * binom(n, j) * factorial(j))
        return p

    def moment(self, k):
        return self.a**k / factorial(k)

    def functional(self):
        return binomial_functional(self.moment, self.spec_string())

    def norm_squared(self, n):
        return factorial(n) * self.a**n

    def measure(self, truncation=None):
        if truncation is None:
            raise IndexOutOfRange("charlier measure has infinite support; pass a truncation")
        pts = range(truncation + 1)
        return DiscreteMeasure(
            tuple((Fraction(x), self.a**x / factorial(x)) for x in pts),
            "e^a divided out; truncated (not a finite measure)",
        )

    def q_closed(self, n, i):
        a = self.a
        return Charlier(a=-a).monic(n).compose(Poly.linear(-1, i)) * (a**i / (factorial(i) * factorial(n)))

    def duality_pair(self, n, m):
        a = self.a
        lhs = sign(n) / a**n * self.monic(n)(m)
        rhs = sign(m) / a**m * self.monic(m)(n)
        return lhs, rhs


class Meixner(Family):
    name = "meixner"
    param_names = ("a", "c")

    def _validate(self):
        if self.a in (0, 1):
            raise ForbiddenParameter("meixner: a must avoid 0 and 1")

    def _monic(self, n):
        a, c = self.a, self.c
        t = 1 - 1 / a
        p = Poly()
        for j in range(n + 1):
            coef = pochhammer(c + j, n - j) * t ** (j - n) * binom(n, j) * factorial(j)
            p = p + Poly.binomial(j) * coef
        return p

    def generating(self, n):
        """Coefficient of z^n in (1-z/a)^x (1-z)^{-x-c}."""
        a = self.a
        return self.monic(n) * ((a - 1) ** n / (a**n * factorial(n)))

    def moment(self, k):
        a, c = self.a, self.c
        return a**k * pochhammer(c, k) / ((1 - a) ** k * factorial(k))

    def functional(self):
        if is_nonpositive_integer(self.c):
            raise ForbiddenParameter("meixner: c must avoid 0, -1, -2, ...")
        return binomial_functional(self.moment, self.spec_string())

    def norm_squared(self, n):
        a, c = self.a, self.c
        return a**n * factorial(n) * pochhammer(c, n) / (1 - a) ** (2 * n)

    def measure(self, truncation=None):
        if truncation is None:
            raise IndexOutOfRange("meixner measure has infinite support; pass a truncation")
        a, c = self.a, self.c
        return DiscreteMeasure(
            tuple((Fraction(x), a**x * pochhammer(c, x) / factorial(x)) for x in range(truncation + 1)),
            "(1-a)^c Gamma(c) divided out; truncated (not a finite measure)",
        )

    def q_closed(self, n, i):
        a, c = self.a, self.c
        other = Meixner(a=a, c=-c - n - i + 1)
        scale = a**i * pochhammer(c, i) / (factorial(i) * factorial(n) * (1 - a) ** i)
        return other.monic(n).compose(Poly.linear(-1, i)) * scale

    def q_closed_tmu(self, n, i):
        """q_n^i = ||m_i||^2 m^{a,-c}_{n-i}(-x) in the generating normalization."""
        if n < i:
            return Poly()
        a, c = self.a, self.c
        lc = (a - 1) ** i / (a**i * factorial(i))
        norm = lc**2 * self.norm_squared(i)
        return Meixner(a=a, c=-c).generating(n - i).reflect() * norm

    def duality_pair(self, n, m):
        a, c = self.a, self.c
        lhs = (a - 1) ** n / (a**n * pochhammer(1 + c, n - 1)) * self.monic(n)(m)
        rhs = (a - 1) ** m / (a**m * pochhammer(1 + c, m - 1)) * self.monic(m)(n)
        return lhs, rhs


class Krawtchouk(Family):
    name = "krawtchouk"
    param_names = ("a", "N")

    def _validate(self):
        if self.a in (0, -1):
            raise ForbiddenParameter("krawtchouk: a must avoid 0 and -1")

    def _monic(self, n):
        # the j! factor makes the sum monic and orthogonal for the weight below
        a, N = self.a, self.N
        p = Poly()
        for j in range(n + 1):
            coef = sign(j) * (1 + a) ** j * pochhammer(N - n, n - j) / a**j * binom(n, j) * factorial(j)
            p = p + Poly.binomial(j) * coef
        return p * (sign(n) * a**n / (1 + a) ** n)

    def moment(self, k):
        a, N = self.a, self.N
        return pochhammer(N - k, k) * a**k / ((1 + a) ** k * factorial(k))

    def functional(self):
        return binomial_functional(self.moment, self.spec_string())

    def norm_squared(self, n):
        a, N = self.a, self.N
        return factorial(n) * pochhammer(N - n, n) * a**n / (1 + a) ** (2 * n)

    def support_size(self):
        return int(self.N) if is_positive_integer(self.N) else None

    def measure(self, truncation=None):
        if not is_positive_integer(self.N):
            raise IndexOutOfRange("krawtchouk measure needs N a positive integer")
        a, N = self.a, int(self.N)
        pts = range(N)
        w = [binom(N - 1, x) * a**x for x in pts]
        return normalize_mass(pts, w, "Gamma(N)/(1+a)^(N-1) prefactor folded into unit mass")

    def q_closed(self, n, i):
        a, N = self.a, self.N
        other = Krawtchouk(a=a, N=-N + i + n + 1)
        scale = a**i * pochhammer(N - i, i) / (factorial(i) * factorial(n) * (1 + a) ** i)
        return other.monic(n).compose(Poly.linear(-1, i)) * scale

    def duality_pair(self, n, m):
        a, N = self.a, self.N
        lhs = factorial(n) * (a + 1) ** n / (a**n * pochhammer(2 - N, n - 1)) * self.normalized(n)(m)
        rhs = factorial(m) * (a + 1) ** m / (a**m * pochhammer(2 - N, m - 1)) * self.normalized(m)(n)
        return lhs, rhs


class Hahn(Family):
    name = "hahn"
    param_names = ("alpha", "c", "N")

    def _validate(self):
        u = self.alpha + self.c - self.N
        if u.denominator == 1 and u <= -1:
            raise ForbiddenParameter("hahn: alpha+c-N must avoid -1, -2, ...")

    def _monic(self, n):
        al, c, N = self.alpha, self.c, self.N
        p = Poly()
        for j in range(n + 1):
            den = pochhammer(n + al + c - N + j, n - j)
            if den == 0:
                raise ForbiddenParameter(f"hahn: vanishing denominator at n={n}, j={j}")
            coef = pochhammer(1 - N + j, n - j) * pochhammer(c + j, n - j) / den * binom(n, j) * factorial(j)
            p = p + Poly.binomial(j) * coef
        return p

    def moment(self, k):
        al, c, N = self.alpha, self.c, self.N
        den = pochhammer(c + al + 1 - N, k)
        if den == 0:
            raise ForbiddenParameter("hahn: moment denominator vanishes")
        return pochhammer(N - k, k) * pochhammer(c, k) / (den * factorial(k))

    def functional(self):
        return binomial_functional(self.moment, self.spec_string())

    def norm_squared(self, n):
        al, c, N = self.alpha, self.c, self.N
        u = al - N + c
        val = (factorial(n) * pochhammer(N - n, n) * pochhammer(al - N + 1, n)
               * pochhammer(c, n) * pochhammer(c + al, n))
        if n == 0:
            return val
        den = (u + 2 * n) * pochhammer(u + 1, n - 1) * pochhammer(u + n, n) ** 2
        if den == 0:
            raise ForbiddenParameter("hahn: norm denominator vanishes")
        return val / den

    def support_size(self):
        return int(self.N) if is_positive_integer(self.N) else None

    def measure(self, truncation=None):
        if not is_positive_integer(self.N):
            raise IndexOutOfRange("hahn measure needs N a positive integer")
        al, c, N = self.alpha, self.c, int(self.N)
        pts = range(N)
        # Gamma(N)Gamma(alpha-x)Gamma(x+c)/(Gamma(N-x)x!) over Gamma(alpha-N+1)Gamma(c)
        w = [pochhammer(al - N + 1, N - 1 - x) * pochhammer(c, x) * pochhammer(Fraction(N - x), x) / factorial(x)
             for x in pts]
        return normalize_mass(
            pts, w, "Gamma(alpha-N+1)Gamma(c)Gamma(alpha+c)/Gamma(alpha+c+1-N) divided out"
        )

    def q_closed(self, n, i):
        al, c, N = self.alpha, self.c, self.N
        other = Hahn(alpha=i - al, c=-c - n - i + 1, N=n + 1 + i - N)
        return other.monic(n).compose(Poly.linear(-1, i)) * (self.moment(i) / factorial(n))


# derivative families ------------------------------------------------------


def _jacobi_coeffs(n, al, be):
    """Coefficients of P_n^{al,be} in powers of (x-1)."""
    return [pochhammer(al + 1 + j, n - j) / factorial(n) * Fraction(1, 2**j)
            * pochhammer(n + al + be + 1, j) * binom(n, j) for j in range(n + 1)]


def jacobi_poly(n, al, be) -> Poly:
    al, be = Q(al), Q(be)
    p = Poly()
    base = X - 1
    for j, c in enumerate(_jacobi_coeffs(n, al, be)):
        if c:
            p = p + base**j * c
    return p


def jacobi_homogenized(n, al, be) -> Poly:
    """(1-x)^n P_n^{al,be}((x+3)/(x-1)) as a polynomial in x."""
    al, be = Q(al), Q(be)
    p = Poly()
    one_minus_x = Poly.linear(-1, 1)
    for j, c in enumerate(_jacobi_coeffs(n, al, be)):
        if c:
            p = p + one_minus_x ** (n - j) * (c * (-4) ** j)
    return p


def jacobi_monic_norm(n, al, be) -> Fraction:
    al, be = Q(al), Q(be)
    if n == 0:
        return ONE_Q
    s = al + be
    den = (2 * n + s + 1) * pochhammer(s + 2, n - 1) * pochhammer(n + s + 1, n) ** 2
    if den == 0:
        raise ForbiddenParameter("jacobi: norm denominator vanishes")
    return 4**n * factorial(n) * pochhammer(al + 1, n) * pochhammer(be + 1, n) / den


class Jacobi(Family):
    name = "jacobi"
    param_names = ("alpha", "beta")
    operator = "derivative"
    x0 = Fraction(1)

    def _validate(self):
        s = self.alpha + self.beta
        if s.denominator == 1 and s <= -1:
            raise ForbiddenParameter("jacobi: alpha+beta must avoid -1, -2, ...")

    def normalized(self, n):
        return jacobi_poly(n, self.alpha, self.beta)

    def _monic(self, n):
        p = self.normalized(n)
        if p.degree != n:
            raise ForbiddenParameter(f"jacobi: P_{n} has degenerate leading coefficient")
        return p / p.lc

    def moment(self, k):
        al, be = self.alpha, self.beta
        return (-2) ** k * pochhammer(al + 1, k) / pochhammer(al + be + 2, k)

    def functional(self):
        return taylor_functional(self.x0, self.moment, self.spec_string())

    def norm_squared(self, n):
        return jacobi_monic_norm(n, self.alpha, self.beta)

    def q_closed(self, n, i):
        al, be = self.alpha, self.beta
        scale = (-2) ** i * pochhammer(al + 1, i) / pochhammer(al + be + 2, n + i)
        return jacobi_homogenized(n, al + be + i + 1, -n - be - 1) * scale


def laguerre_poly(n, al) -> Poly:
    al = Q(al)
    p = Poly()
    for j in range(n + 1):
        p = p + Poly.monomial(j, binom(n + al, n - j) * (-1) ** j / factorial(j))
    return p


class Laguerre(Family):
    name = "laguerre"
    param_names = ("alpha",)
    operator = "derivative"
    x0 = Fraction(0)

    def normalized(self, n):
        return laguerre_poly(n, self.alpha)

    def _monic(self, n):
        return self.normalized(n) * (sign(n) * factorial(n))

    def moment(self, k):
        return pochhammer(self.alpha + 1, k)

    def functional(self):
        if is_nonpositive_integer(self.alpha + 1):
            raise ForbiddenParameter("laguerre: alpha must avoid -1, -2, ...")
        return taylor_functional(self.x0, self.moment, self.spec_string())

    def norm_squared(self, n):
        return factorial(n) * pochhammer(self.alpha + 1, n)

    def q_closed(self, n, i):
        al = self.alpha
        return laguerre_poly(n, -al - i - n - 1).reflect() * (sign(n) * pochhammer(al + 1, i))


def ultraspherical_poly(n, lam) -> Poly:
    """C_n^lam from (1-2xz+z^2)^{-lam} = sum C_n^lam(x) z^n."""
    lam = Q(lam)
    p = Poly()
    for k in range(n // 2 + 1):
        c = sign(k) * pochhammer(lam, n - k) / (factorial(k) * factorial(n - 2 * k)) * 2 ** (n - 2 * k)
        p = p + Poly.monomial(n - 2 * k, c)
    return p


class Ultraspherical(Family):
    name = "ultraspherical"
    param_names = ("lam",)
    operator = "tmu"
    x0 = Fraction(1)

    def _validate(self):
        if self.lam == 0:
            raise ForbiddenParameter("ultraspherical: lambda must be nonzero")

    def normalized(self, n):
        return ultraspherical_poly(n, self.lam)

    generating = normalized

    def _monic(self, n):
        p = self.normalized(n)
        if p.degree != n:
            raise ForbiddenParameter(f"ultraspherical: C_{n} has degree {p.degree}")
        return p / p.lc

    def moment(self, k):
        # Jacobi(lam-1/2, lam-1/2) about x0 = 1
        h = self.lam + Fraction(1, 2)
        return (-2) ** k * pochhammer(h, k) / pochhammer(2 * self.lam + 1, k)

    def functional(self):
        return taylor_functional(self.x0, self.moment, self.spec_string())

    def norm_squared(self, n):
        h = self.lam - Fraction(1, 2)
        return jacobi_monic_norm(n, h, h)

    def q_closed(self, n, i):
        """q_n^i = ||C_i||^2 C^{-lam}_{n-i} for the T_mu operator."""
        if n < i:
            return Poly()
        lc = self.normalized(i).lc
        return ultraspherical_poly(n - i, -self.lam) * (lc**2 * self.norm_squared(i))


def chebyshev_first(n) -> Poly:
    """Coefficients of (1-xz)/(1-2xz+z^2)."""
    if n == 0:
        return ONE
    return ultraspherical_poly(n, 1) - X * ultraspherical_poly(n - 1, 1)


def chebyshev_second(n) -> Poly:
    return ultraspherical_poly(n, 1)


# quadratic lattice ----------------------------------------------------------


class QuadraticFamily(Family):
    lattice = "quadratic"
    operator = "delta-lambda"

    @property
    def u(self) -> Fraction:
        raise NotImplementedError

    def lam(self) -> Poly:
        return lattice_lambda(self.u)

    def f(self, j: int) -> Poly:
        return f_poly(j, self.u)

    def functional(self):
        """Functional in the lattice variable, fixed by mu^0_k = L(f_k)."""
        u = self.u
        return Functional(lambda k: f_poly(k, u), self.moment, None, self.spec_string())

    def lattice_monic(self, n: int) -> Poly:
        """Monic polynomial in the lattice variable lambda."""
        return self.monic(n)


class DualHahn(QuadraticFamily):
    name = "dualhahn"
    param_names = ("alpha", "c", "N")

    @property
    def u(self):
        return self.alpha + self.c - self.N

    def _monic(self, n):
        c, N = self.c, self.N
        p = Poly()
        for j in range(n + 1):
            coef = pochhammer(Fraction(-n), j) * pochhammer(1 - N + j, n - j) * pochhammer(c + j, n - j)
            p = p + self.f(j) * coef
        return p

    def moment(self, k):
        c, N = self.c, self.N
        return sign(k) * pochhammer(c, k) * pochhammer(N - k, k) / factorial(k)

    def norm_squared(self, n):
        al, c, N = self.alpha, self.c, self.N
        return factorial(n) * pochhammer(c, n) * pochhammer(N - n, n) * pochhammer(al - n, n)

    def support_size(self):
        return int(self.N) if is_positive_integer(self.N) else None

    def measure(self, truncation=None):
        if not is_positive_integer(self.N):
            raise IndexOutOfRange("dual hahn measure needs N a positive integer")
        al, c, N, u = self.alpha, self.c, int(self.N), self.u
        lam = self.lam()
        pts, w = [], []
        for x in range(N):
            den = pochhammer(x + u, N) * pochhammer(al - N + 1, x) * factorial(x)
            if den == 0:
                raise ForbiddenParameter("dual hahn: weight denominator vanishes")
            w.append((2 * x + u) * pochhammer(c, x) * pochhammer(Fraction(N - x), x) / den)
            pts.append(lam(x))
        return normalize_mass(pts, w, "Gamma(alpha+1-N)/Gamma(alpha) folded into unit mass")

    def q_closed_quadratic(self, n, m, i):
        """q^i_{n+m-1}(x) as a dual Hahn polynomial in lambda(-x+i)."""
        al, c, N = self.alpha, self.c, self.N
        K = n + m - 1
        other = DualHahn(alpha=-al + n + m, c=2 - c - n - m - i, N=-N + n + m + i)
        arg = other.lam().compose(Poly.linear(-1, i))
        return other.monic(K).compose(arg) * (self.moment(i) / factorial(K))

    def duality_pair(self, k, n):
        al, c, N = self.alpha, self.c, self.N
        lam_n = n * (n + self.u)
        lhs = self.monic(k)(lam_n) / (pochhammer(c, k) * pochhammer(1 - N, k))
        hahn = Hahn(alpha=al, c=c, N=N)
        rhs = pochhammer(n + self.u, n) / (pochhammer(c, n) * pochhammer(1 - N, n)) * hahn.monic(n)(k)
        return lhs, rhs


class Racah(QuadraticFamily):
    """r_n^{alpha,beta,gamma,delta}; with alpha = -N-1 this is R_n^{N,...}/n!."""

    name = "racah"
    param_names = ("alpha", "beta", "gamma", "delta")

    @classmethod
    def from_N(cls, N, beta, gamma, delta) -> Racah:
        return cls(alpha=-Q(N) - 1, beta=beta, gamma=gamma, delta=delta)

    @property
    def u(self):
        return self.gamma + self.delta + 1

    @property
    def N(self) -> Fraction:
        return -self.alpha - 1

    def _validate(self):
        s = self.alpha + self.beta
        if s.denominator == 1 and s <= -2:
            raise ForbiddenParameter("racah: alpha+beta must avoid -2, -3, ...")

    def normalized(self, n):
        al, be, ga, de = self.alpha, self.beta, self.gamma, self.delta
        p = Poly()
        for j in range(n + 1):
            den = sign(j) * factorial(n - j) * pochhammer(n + al + be + 1 + j, n - j)
            if den == 0:
                raise ForbiddenParameter(f"racah: vanishing denominator at n={n}, j={j}")
            num = pochhammer(al + 1 + j, n - j) * pochhammer(be + de + 1 + j, n - j) * pochhammer(ga + 1 + j, n - j)
            p = p + self.f(j) * (num / den)
        return p

    def _monic(self, n):
        return self.normalized(n) * factorial(n)

    def moment(self, k):
        al, be, ga, de = self.alpha, self.beta, self.gamma, self.delta
        den = pochhammer(al + be + 2, k) * factorial(k)
        if den == 0:
            raise ForbiddenParameter("racah: moment denominator vanishes")
        return pochhammer(al + 1, k) * pochhammer(be + de + 1, k) * pochhammer(ga + 1, k) / den

    def sigma(self, n) -> Fraction:
        be, ga, de, N = self.beta, self.gamma, self.delta, self.N
        return Fraction(sign(n)) / (pochhammer(-N, n) * pochhammer(be + de + 1, n) * pochhammer(ga + 1, n) * factorial(n))

    def mass_M(self) -> Fraction:
        be, ga, de = self.beta, self.gamma, self.delta
        N = int(self.N)
        return (pochhammer(-be, N) * pochhammer(ga + de + 2, N)
                / (pochhammer(-be + ga + 1, N) * pochhammer(de + 1, N)))

    def raw_norm_squared(self, n) -> Fraction:
        """Monic norm under the unnormalized weight (total mass M)."""
        be, ga, de, N = self.beta, self.gamma, self.delta, self.N
        num = sign(n) * self.mass_M() * pochhammer(be - ga - N, n) * pochhammer(-de - N, n) * pochhammer(be + 1, n)
        den = self.sigma(n) * pochhammer(be - N + 1, 2 * n) * pochhammer(be - N + n, n)
        return num / den

    def norm_squared(self, n):
        be, ga, de, N = self.beta, self.gamma, self.delta, self.N
        num = sign(n) * pochhammer(be - ga - N, n) * pochhammer(-de - N, n) * pochhammer(be + 1, n)
        den = self.sigma(n) * pochhammer(be - N + 1, 2 * n) * pochhammer(be - N + n, n)
        return num / den

    def support_size(self):
        return int(self.N) + 1 if is_positive_integer(self.N) else None

    def raw_weight(self, x: int) -> Fraction:
        be, ga, de, N = self.beta, self.gamma, self.delta, self.N
        u = self.u
        num = (pochhammer(-N, x) * pochhammer(be + de + 1, x) * pochhammer(ga + 1, x)
               * pochhammer(u, x) * pochhammer((u + 2) / 2, x))
        den = (pochhammer(N + u + 1, x) * pochhammer(-be + ga + 1, x) * pochhammer(u / 2, x)
               * pochhammer(de + 1, x) * factorial(x))
        if den == 0:
            raise ForbiddenParameter("racah: weight denominator vanishes")
        return num / den

    def raw_measure(self) -> DiscreteMeasure:
        if not is_positive_integer(self.N):
            raise IndexOutOfRange("racah measure needs N = -alpha-1 a positive integer")
        lam = self.lam()
        return DiscreteMeasure(
            tuple((lam(x), self.raw_weight(x)) for x in range(int(self.N) + 1)),
            "weights as displayed; total mass M",
        )

    def measure(self, truncation=None):
        raw = self.raw_measure()
        return normalize_mass(raw.points, raw.weights, "divided by total mass M")


class Wilson(QuadraticFamily):
    """w_n^{a,b,c,d} in the variable X, expanded on g_j(X) = (-1)^j/j! prod (X+(a+i)^2).

    With X = -lambda(y) - a^2, lambda(y) = y(y+2a), one has g_j(X) = (-1)^j f_j(lambda),
    so the family also lives on the quadratic lattice with u = 2a.
    """

    name = "wilson"
    param_names = ("a", "b", "c", "d")

    def _validate(self):
        s = self.a + self.b + self.c + self.d
        if s.denominator == 1 and s <= 0:
            raise ForbiddenParameter("wilson: a+b+c+d must avoid 0, -1, -2, ...")

    @property
    def u(self):
        return 2 * self.a

    def g(self, j) -> Poly:
        a = self.a
        return Poly.from_roots([-((a + i) ** 2) for i in range(j)], Fraction(sign(j), factorial(j)))

    def normalized(self, n):
        a, b, c, d = self.a, self.b, self.c, self.d
        s = a + b + c + d
        p = Poly()
        for j in range(n + 1):
            den = factorial(n - j) * pochhammer(n + s - 1 + j, n - j)
            if den == 0:
                raise ForbiddenParameter(f"wilson: vanishing denominator at n={n}, j={j}")
            num = pochhammer(a + b + j, n - j) * pochhammer(a + c + j, n - j) * pochhammer(a + d + j, n - j)
            p = p + self.g(j) * (num / den)
        return p

    def _monic(self, n):
        p = self.normalized(n)
        return p / p.lc

    def g_moment(self, k) -> Fraction:
        """L(g_k) for the mass-one Wilson functional in X."""
        return sign(k) * self.moment(k)

    def moment(self, k):
        a, b, c, d = self.a, self.b, self.c, self.d
        den = pochhammer(a + b + c + d, k) * factorial(k)
        if den == 0:
            raise ForbiddenParameter("wilson: moment denominator vanishes")
        return pochhammer(a + b, k) * pochhammer(a + c, k) * pochhammer(a + d, k) / den

    def x_functional(self) -> Functional:
        """Functional in the natural variable X."""
        return Functional(self.g, self.g_moment, None, self.spec_string())

    def to_lattice(self) -> Poly:
        """X as a polynomial in the lattice variable: X = -lambda - a^2."""
        return Poly.linear(-1, -self.a**2)

    def lattice_monic(self, n):
        return self.monic(n).compose(self.to_lattice()) * sign(n)

    def norm_squared(self, n):
        # the lattice-monic norm; equal to the X-monic norm
        L = self.functional()
        p = self.lattice_monic(n)
        return L(p * p)


# registry -----------------------------------------------------------------

FAMILIES: dict[str, type[Family]] = {
    cls.name: cls
    for cls in (Charlier, Meixner, Krawtchouk, Hahn, DualHahn, Racah, Wilson, Jacobi, Laguerre, Ultraspherical)
}
_ALIASES = {"dual-hahn": "dualhahn", "dual_hahn": "dualhahn", "gegenbauer": "ultraspherical"}
_PARAM_ALIASES = {"lambda": "lam", "l": "lam"}


def parse_family(text: str) -> Family:
    """Parse ``"hahn:alpha=3,c=1,N=4"`` style strings."""
    name, _, rest = text.partition(":")
    name = _ALIASES.get(name.strip().lower(), name.strip().lower())
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in {text!r}")
        key = _PARAM_ALIASES.get(key.strip(), key.strip())
        params[key] = Fraction(val.strip())
    if name == "racah" and "N" in params:
        params["alpha"] = -params.pop("N") - 1
    return FAMILIES[name](**params)


def moment_table_closed(family: Family, N: int, rows: int | None = None) -> list[list[Fraction]]:
    """mu[i][j] = mu^i_j, 0 <= i < rows, 0 <= j <= N, from the family's mu^0 closed forms.

    Uses the expansions: derivative mu^i_j = mu_{i+j}/j!; Delta
    mu^i_j = sum_l binom(j,i-l) binom(j+l,l) mu^0_{j+l}; quadratic lattice
    mu^i_j = sum_l (-1)^l binom(j,l) binom(j+i-l,j) (u+i+j-l)_l mu^0_{i+j-l}.
    """
    rows = N + 1 if rows is None else rows
    mu0 = family.moment
    table = []
    for i in range(rows):
        row = []
        for j in range(N + 1):
            if family.operator == "derivative":
                v = mu0(i + j) / factorial(j)
            elif family.lattice == "quadratic":
                u = family.u
                v = sum((sign(l) * binom(j, l) * binom(j + i - l, j) * pochhammer(u + i + j - l, l) * mu0(i + j - l)
                         for l in range(min(i, j) + 1)), Fraction(0))
            else:
                v = sum((binom(j, i - l) * binom(j + l, l) * mu0(j + l) for l in range(i + 1)), Fraction(0))
            row.append(v)
        table.append(row)
    return table


def q_general_delta(family: Family, n: int, i: int) -> Poly:
    """q_n^i(x) = sum_g mu^0_{g+i} binom(g+i, i) binom(-x+i, n-g) for Delta families."""
    p = Poly()
    for g in range(n + 1):
        p = p + binom(-X + i, n - g) * (family.moment(g + i) * binom(g + i, i))
    return p


def q_quadratic_closed(family: QuadraticFamily, n: int, m: int, i: int) -> Poly:
    """q^i_{n+m-1}(x) = sum_g mu^0_{g+i} binom(g+i,i) (x-i)_{K-g} (x+u+g+i)_{K-g}/(K-g)!."""
    K = n + m - 1
    u = family.u
    p = Poly()
    for g in range(K + 1):
        term = pochhammer(X - i, K - g) * pochhammer(X + (u + g + i), K - g)
        p = p + term * (family.moment(g + i) * binom(g + i, i) / factorial(K - g))
    return p
