"""Exact rational scalars and the combinatorial primitives built on them.

Every scalar in the package is a :class:`fractions.Fraction`; ``Rational`` is
an alias kept for readability in signatures.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import factorial as _factorial

Rational = Fraction


class ErrorKind(enum.Enum):
    FORBIDDEN_PARAMETER = "ForbiddenParameter"
    DEGENERATE_MEASURE = "DegenerateMeasure"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"


class ParamError(ValueError):
    """A precondition on parameters or indices failed."""

    kind = ErrorKind.FORBIDDEN_PARAMETER

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


class ForbiddenParameter(ParamError):
    kind = ErrorKind.FORBIDDEN_PARAMETER


class DegenerateMeasure(ParamError):
    kind = ErrorKind.DEGENERATE_MEASURE


class IndexOutOfRange(ParamError):
    kind = ErrorKind.INDEX_OUT_OF_RANGE


def Q(value) -> Fraction:
    """Coerce ints, strings like ``"3/7"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return Fraction(value)


def fmt(value) -> str:
    """Canonical ``p/q`` (or ``p``) text form."""
    return str(Q(value))


def factorial(n: int) -> int:
    if n < 0:
        raise IndexOutOfRange(f"factorial of negative integer {n}")
    return _factorial(n)


def _one_like(u):
    if isinstance(u, int):
        return Fraction(1)
    return u * 0 + 1


def pochhammer(u, n: int):
    """Rising factorial (u)_n = u(u+1)...(u+n-1).

    ``u`` may be a Fraction or any ring element supporting ``+ int`` and ``*``
    (the polynomial type uses this for factors like (2x+u+j)_j).  Negative
    ``n`` uses the convention (u)_{-k} = 1/(u-k)_k, defined for scalars only.
    """
    if n < 0:
        den = pochhammer(u - (-n), -n)
        if den == 0:
            raise ForbiddenParameter(f"({u})_{n} has a vanishing denominator")
        return Fraction(1) / den
    result = _one_like(u)
    for k in range(n):
        result = result * (u + k)
    return result


def falling(u, n: int):
    """Falling factorial u(u-1)...(u-n+1)."""
    result = _one_like(u)
    for k in range(n):
        result = result * (u - k)
    return result


def binom(x, k: int):
    """Generalized binomial coefficient x(x-1)...(x-k+1)/k!; zero for k < 0."""
    if k < 0:
        return _one_like(x) * 0
    return falling(x, k) * Fraction(1, _factorial(k))


def is_nonpositive_integer(u) -> bool:
    u = Q(u)
    return u.denominator == 1 and u <= 0


def is_positive_integer(u) -> bool:
    u = Q(u)
    return u.denominator == 1 and u > 0


def sign(k: int) -> int:
    """(-1)^k."""
    return -1 if k % 2 else 1


def comb2(n: int) -> int:
    """binom(n, 2) for integer n >= 0."""
    return n * (n - 1) // 2


# combinatorial lemma used by the difference-operator computations -------------
# Each function returns (lhs, rhs); x and u may be scalars or polynomials.


def abc2_sides(x, i: int, j: int):
    """binom(x, i) against sum_l binom(j, i-l) binom(x-j, l)."""
    rhs = _one_like(x) * 0
    for l in range(i + 1):
        rhs = rhs + binom(x - j, l) * binom(Fraction(j), i - l)
    return binom(x, i), rhs


def abc1_sides(x, n: int, g: int, i: int):
    """For i <= g <= n+i: binom(g,i) binom(-x+i, n+i-g) against the sum over j."""
    if not i <= g <= n + i:
        raise IndexOutOfRange(f"need i <= g <= n+i, got i={i}, g={g}, n={n}")
    lhs = binom(-x + i, n + i - g) * binom(Fraction(g), i)
    rhs = _one_like(x) * 0
    for j in range(min(n, g) + 1):
        rhs = rhs + binom(-x, n - j) * (binom(Fraction(j), i + j - g) * binom(Fraction(g), g - j))
    return lhs, rhs


def abc3_sides(x, u, n: int, g: int, i: int):
    """For 0 <= g <= n, with the last binomial's upper index read as n.

    binom(g+i,i) binom(x+u+n+i-1, n-g) (x-i)_{n-g} against
    sum_j (-1)^{j-g} (u+g+i)_{j-g} (x)_{n-j} binom(j,j-g) binom(g+i,j) binom(x+u+n-1, n-j).
    """
    if not 0 <= g <= n:
        raise IndexOutOfRange(f"need 0 <= g <= n, got g={g}, n={n}")
    lhs = binom(x + u + n + i - 1, n - g) * pochhammer(x - i, n - g) * binom(Fraction(g + i), i)
    rhs = _one_like(x) * 0
    for j in range(g, n + 1):
        c = sign(j - g) * pochhammer(u + g + i, j - g) * binom(Fraction(j), j - g) * binom(Fraction(g + i), j)
        if c:
            rhs = rhs + pochhammer(x, n - j) * binom(x + u + n - 1, n - j) * c
    return lhs, rhs
