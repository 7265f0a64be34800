"""Scalar oracles evaluated straight from the defining sums, independent of the polynomial engine."""

import itertools
from fractions import Fraction

from catalan_basis.factorial_kit import binom, half_binom, p_value


def h_at_point(ell, m, u, xv, yvals):
    total = Fraction(0)
    for s in itertools.product(range(m + 1), repeat=ell):
        S = sum(s)
        term = Fraction((-1) ** S) * p_value(xv, m + u + S) / half_binom(Fraction(2 * (m + u + S) + 1, 2), m + 1)
        prev = 0
        for yi, si in zip(yvals, s):
            term *= binom(m, si) * p_value(yi, u + m + prev) / p_value(yi, u + prev + si)
            prev += si
        total += term
    return total


def lemma1_sides(m, u, k):
    """Both sides of the balanced-sum identity at an integer k, by direct rational arithmetic."""
    half = Fraction(1, 2)
    lhs = sum(
        Fraction((-1) ** s * binom(m, s)) / half_binom(m + s + u + half, m + 1) * half_binom(k + m + u + s + half, 2 * m)
        for s in range(m + 1)
    )
    falling_k = Fraction(1)
    for j in range(m):
        falling_k *= k - j
    rising_a = Fraction(1)
    for j in range(m):
        rising_a *= u + k + Fraction(3, 2) + j
    rising_b = Fraction(1)
    for j in range(2 * m + 1):
        rising_b *= u + half + j
    return lhs, (m + 1) * falling_k * rising_a / rising_b
