"""Shared helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from eorec.laurent import LaurentPolynomial


def P(arity: int, terms: dict) -> LaurentPolynomial:
    return LaurentPolynomial(arity, {k: Fraction(v) for k, v in terms.items()})


def sym_poly(arity: int, patterns: dict[tuple[int, ...], object]) -> LaurentPolynomial:
    """Symmetric polynomial: every distinct permutation of each exponent
    pattern receives that pattern's coefficient."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for pattern, coef in patterns.items():
        for exp in set(permutations(pattern)):
            terms[exp] = Fraction(coef)
    return LaurentPolynomial(arity, terms)
