"""Exact rational Bernoulli numbers, Bernoulli polynomials, and power sums.

Everything here is exact: values are `fractions.Fraction` throughout and no
floating point is ever used, so downstream main-term computations carry no
rounding error.  Conventions: B_1 = -1/2 (the generating-function x/(e^x-1)
convention), B_n = 0 for odd n >= 3.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .core import InternalError, ValidationError

__all__ = [
    "Rational",
    "BernoulliPoly",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_eval",
    "power_sum",
    "range_power_sum",
]

# Exact arbitrary-precision rational: the stdlib Fraction already guarantees
# lowest terms and a positive denominator, which is the whole contract.
Rational = Fraction

_B: list[Fraction] = [Fraction(1)]
_B_LOCK = threading.Lock()


def bernoulli_number(n: int) -> Fraction:
    """Exact B_n via the recurrence sum_{i=0}^{m} C(m+1, i) B_i = 0 (m >= 1).

    Memoized; the table only ever grows, so concurrent readers are safe and
    results are independent of interleaving.
    """
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    if n >= len(_B):
        with _B_LOCK:
            while len(_B) <= n:
                m = len(_B)
                acc = Fraction(0)
                for i in range(m):
                    acc += comb(m + 1, i) * _B[i]
                _B.append(-acc / comb(m + 1, m))
    return _B[n]


@dataclass(frozen=True)
class BernoulliPoly:
    """B_n(x) = sum_{i=0}^{n} C(n,i) B_i x^{n-i} as an exact coefficient list.

    ``coefficients[i]`` is the coefficient of x^{n-i}, namely C(n,i)*B_i;
    the list has length n+1 and leading coefficient 1.
    """

    degree: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.degree + 1:
            raise InternalError("coefficient list length must be degree+1")
        if self.coefficients[0] != 1:
            raise InternalError("leading coefficient must be 1")

    def eval(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in self.coefficients:
            acc = acc * x + c
        return acc


def bernoulli_poly(n: int) -> BernoulliPoly:
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    coeffs = tuple(comb(n, i) * bernoulli_number(i) for i in range(n + 1))
    return BernoulliPoly(degree=n, coefficients=coeffs)


def bernoulli_poly_eval(n: int, x: Fraction | int) -> Fraction:
    """Exact B_n(x)."""
    return bernoulli_poly(n).eval(Fraction(x))


def power_sum(r: int, x: int) -> Fraction:
    """sum_{k=0}^{x-1} k^{r-1} as (B_r(x) - B_r)/r; always an exact integer.

    The k=0 term uses the convention 0^0 = 1, so power_sum(1, x) = x.
    """
    if not isinstance(r, int) or r < 1:
        raise ValidationError(f"r must be a positive integer, got {r!r}")
    if not isinstance(x, int) or x < 1:
        raise ValidationError(f"x must be a positive integer, got {x!r}")
    val = (bernoulli_poly_eval(r, x) - bernoulli_number(r)) / r
    if val.denominator != 1:
        raise InternalError(f"power_sum({r},{x}) not an integer: {val}")
    return val


def range_power_sum(r: int, a: int, n: int) -> Fraction:
    """sum_{k=a}^{n} k^{r-1} = (B_r(n+1) - B_r(a))/r, exact."""
    if not isinstance(r, int) or r < 1:
        raise ValidationError(f"r must be a positive integer, got {r!r}")
    if not (isinstance(a, int) and isinstance(n, int) and 1 <= a <= n):
        raise ValidationError(f"need 1 <= a <= n, got a={a!r}, n={n!r}")
    val = (bernoulli_poly_eval(r, n + 1) - bernoulli_poly_eval(r, a)) / r
    if val.denominator != 1:
        raise InternalError(f"range_power_sum({r},{a},{n}) not an integer: {val}")
    return val
