"""Dense univariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Immutable polynomial; ``coeffs[k]`` is the coefficient of x**k."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.coeffs = _trim([c if isinstance(c, Fraction) else Fraction(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> Poly:
        # coeffs already Fractions and trimmed
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @classmethod
    def linear(cls, a, b) -> Poly:
        """a*x + b."""
        return cls((b, a))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Poly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @classmethod
    def binomial(cls, k: int, shift=0) -> Poly:
        """binom(x + shift, k) as a polynomial in x."""
        s = Fraction(shift)
        return cls.from_roots([j - s for j in range(k)], Fraction(1, factorial(k)))

    @classmethod
    def interpolate(cls, xs: Sequence, ys: Sequence) -> Poly:
        """Lagrange interpolant of degree < len(xs) through distinct nodes."""
        xs = [Fraction(x) for x in xs]
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation nodes must be distinct")
        out = cls()
        for i, (xi, yi) in enumerate(zip(xs, ys)):
            if not yi:
                continue
            others = xs[:i] + xs[i + 1:]
            den = Fraction(1)
            for xj in others:
                den *= xi - xj
            out = out + cls.from_roots(others, Fraction(yi) / den)
        return out

    # basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = f"({c})*{mono}" if mono and c.denominator != 1 else (f"{c}*{mono}" if mono else str(c))
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    def to_list(self) -> list[str]:
        """Canonical text form: coefficients low-to-high as ``p/q`` strings."""
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_list(cls, items: Sequence) -> Poly:
        return cls(Fraction(c) for c in items)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                if not self.coeffs:
                    return Poly.const(other)
                return Poly._raw(_trim([self.coeffs[0] + other, *self.coeffs[1:]]))
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(_trim(out))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> Poly:
        if isinstance(other, Poly):
            return self + (-other)
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly._raw(())
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
            return Poly._raw(_trim(out))
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly._raw(())
            return Poly._raw(tuple(c * other for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero scalar")
            inv = _ONE / other
            return Poly._raw(tuple(c * inv for c in self.coeffs))
        if isinstance(other, Poly):
            return self.exact_div(other)
        return NotImplemented

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw((_ONE,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lc_inv = _ONE / other.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        quot = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c * lc_inv
            quot[k - db] = f
            for j, bj in enumerate(other.coeffs):
                rem[k - db + j] -= f * bj
        return Poly._raw(_trim(quot)), Poly._raw(_trim(rem))

    def exact_div(self, other: Poly) -> Poly:
        """Quotient of a division known to be exact; raises ArithmeticError otherwise."""
        q, r = self.divmod(other)
        if r.coeffs:
            raise ArithmeticError("inexact polynomial division")
        return q

    # evaluation and composition ----------------------------------------

    def eval(self, x):
        """Horner evaluation; ``x`` may be a scalar or a Poly."""
        if isinstance(x, Poly):
            return self.compose(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval

    def compose(self, q: Poly) -> Poly:
        acc = Poly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def shift(self, c) -> Poly:
        """p(x + c), by synthetic (Taylor) shifting."""
        c = Fraction(c)
        if c == 0 or len(self.coeffs) < 2:
            return self
        a = list(self.coeffs)
        n = len(a)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                a[k] += c * a[k + 1]
        return Poly._raw(_trim(a))

    def scale_var(self, s) -> Poly:
        """p(s*x)."""
        s = Fraction(s)
        out, pw = [], _ONE
        for c in self.coeffs:
            out.append(c * pw)
            pw *= s
        return Poly._raw(_trim(out))

    def reflect(self) -> Poly:
        """p(-x)."""
        return Poly._raw(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    # difference and derivative maps ------------------------------------

    def derivative(self) -> Poly:
        return Poly._raw(tuple(k * c for k, c in enumerate(self.coeffs) if k)) if len(self.coeffs) > 1 else Poly._raw(())

    def forward_difference(self) -> Poly:
        """p(x+1) - p(x)."""
        return self.shift(1) - self

    def backward_difference(self) -> Poly:
        """p(x) - p(x-1)."""
        return self - self.shift(-1)

    # Newton / binomial basis -------------------------------------------

    def to_binomial_basis(self) -> list[Fraction]:
        """Coefficients b_k with p(x) = sum b_k binom(x, k) (b_k = Delta^k p(0))."""
        vals = [self.eval(Fraction(k)) for k in range(len(self.coeffs))]
        out = []
        while vals:
            out.append(vals[0])
            vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
        return out

    @classmethod
    def from_binomial_basis(cls, coeffs: Sequence) -> Poly:
        p = cls._raw(())
        for k, b in enumerate(coeffs):
            if b:
                p = p + cls.binomial(k) * Fraction(b)
        return p


X = Poly.x()
ONE = Poly.const(1)
ZERO = Poly()


def derivative(p: Poly) -> Poly:
    return p.derivative()


def forward_difference(p: Poly) -> Poly:
    return p.forward_difference()


def backward_difference(p: Poly) -> Poly:
    return p.backward_difference()


def compose(p: Poly, q: Poly) -> Poly:
    return p.compose(q)


def expand_in_basis(p: Poly, basis: Sequence[Poly]) -> list[Fraction]:
    """Coefficients c with p = sum c_k basis[k], basis[k] of exact degree k."""
    if p.degree >= len(basis):
        from .arith import IndexOutOfRange

        raise IndexOutOfRange(f"degree {p.degree} exceeds basis of size {len(basis)}")
    rem = p
    out = [_ZERO] * (p.degree + 1)
    for k in range(p.degree, -1, -1):
        c = rem[k]
        if c:
            b = basis[k]
            f = c / b.lc
            out[k] = f
            rem = rem - b * f
    assert rem.is_zero()
    return out
