"""Falling/rising factorials, the odd polynomials P(x, b), and half-integer binomials."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .exact_poly import Polynomial, homogenize, make_varset

__all__ = [
    "PoleError",
    "falling",
    "rising",
    "falling_poly",
    "rising_poly",
    "as_half_integer",
    "half_binom",
    "binom",
    "poly_binom",
    "p_value",
    "p_poly",
    "p_poly_shifted",
    "p_ratio_poly",
]


class PoleError(ZeroDivisionError):
    """A negative-length falling factorial hit a zero factor."""


def _q(a) -> Fraction:
    return a if isinstance(a, Fraction) else Fraction(a)


def falling(a, c: int) -> Fraction:
    """``a (a-1) ... (a-c+1)`` for ``c >= 0``; ``1 / falling(a - c, -c)`` for ``c < 0``."""
    a = _q(a)
    c = int(c)
    if c >= 0:
        out = Fraction(1)
        for j in range(c):
            out *= a - j
        return out
    denom = falling(a - c, -c)
    if not denom:
        raise PoleError(f"falling({a}, {c}) has a pole")
    return 1 / denom


def rising(b, c: int) -> Fraction:
    b = _q(b)
    return falling(b + c - 1, c)


def falling_poly(p: Polynomial, n: int) -> Polynomial:
    """``p (p-1) ... (p-n+1)`` for a polynomial argument, ``n >= 0``."""
    if n < 0:
        raise ValueError("falling_poly needs n >= 0")
    out = Polynomial.constant(p.vars, 1)
    for j in range(n):
        out = out * (p - j)
    return out


def rising_poly(p: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise ValueError("rising_poly needs n >= 0")
    out = Polynomial.constant(p.vars, 1)
    for j in range(n):
        out = out * (p + j)
    return out


def as_half_integer(t) -> Fraction:
    t = _q(t)
    if t.denominator not in (1, 2):
        raise ValueError(f"{t} is not a half-integer")
    return t


def half_binom(top, n: int) -> Fraction:
    """``binom(top, n)`` for a half-integer (or integer) ``top``."""
    top = as_half_integer(top)
    if n < 0:
        raise ValueError("binomial lower index must be non-negative")
    return falling(top, n) / math.factorial(n)


def binom(n: int, k: int) -> int:
    """Integer binomial, zero outside ``0 <= k <= n``."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def poly_binom(p: Polynomial, n: int) -> Polynomial:
    """``binom(p, n)`` with a polynomial top, i.e. ``falling_poly(p, n) / n!``."""
    return falling_poly(p, n).scale(Fraction(1, math.factorial(n)))


def p_value(a, b: int) -> Fraction:
    """``P(a, b) = (a + b) falling (2b + 1) = a * prod_{k<=b} (a^2 - k^2)``."""
    if b < 0:
        raise ValueError("P(a, b) needs b >= 0")
    a = _q(a)
    return falling(a + b, 2 * b + 1)


@lru_cache(maxsize=None)
def _p_coeffs(b: int) -> tuple[Fraction, ...]:
    # x * prod_{k=1..b} (x^2 - k^2), dense ascending coefficients
    coeffs = [Fraction(0), Fraction(1)]
    for k in range(1, b + 1):
        new = [Fraction(0)] * (len(coeffs) + 2)
        for i, c in enumerate(coeffs):
            new[i + 2] += c
            new[i] -= c * k * k
        coeffs = new
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _ratio_coeffs(A: int, B: int) -> tuple[Fraction, ...]:
    coeffs = [Fraction(1)]
    for k in range(B + 1, A + 1):
        new = [Fraction(0)] * (len(coeffs) + 2)
        for i, c in enumerate(coeffs):
            new[i + 2] += c
            new[i] -= c * k * k
        coeffs = new
    return tuple(coeffs)


def p_poly(var: str, b: int, vars=None) -> Polynomial:
    """``P(var, b)`` as a polynomial over ``vars`` (default: just ``var``)."""
    if b < 0:
        raise ValueError("P(x, b) needs b >= 0")
    vars = make_varset(vars if vars is not None else (var,))
    return Polynomial.from_univariate(vars, var, _p_coeffs(b))


def p_poly_shifted(var: str, b: int, shift_var: str, vars=None) -> Polynomial:
    """The homogenized form ``var * prod_k (var^2 - k^2 shift_var^2)``."""
    vars = make_varset(vars if vars is not None else (var, shift_var))
    return homogenize(p_poly(var, b, vars), shift_var, 2 * b + 1)


def p_ratio_poly(var: str, A: int, B: int, vars=None) -> Polynomial:
    """The polynomial quotient ``P(var, A) / P(var, B) = prod_{B<k<=A} (var^2 - k^2)``."""
    if B < 0:
        raise ValueError("P(x, B) needs B >= 0")
    if A < B:
        raise ValueError(f"P(y, {A}) / P(y, {B}) is not a polynomial")
    vars = make_varset(vars if vars is not None else (var,))
    return Polynomial.from_univariate(vars, var, _ratio_coeffs(A, B))
