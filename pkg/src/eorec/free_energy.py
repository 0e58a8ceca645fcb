"""Free energies: symmetric antiderivatives of the stable differentials.

F_{g,n} is the n-fold symmetric integral (1/2**n) int_{-z_i}^{z_i} of
w_{g,n}.  On even monomials this is the term-wise map

    z**(2a)  ->  z**(2a+1) / (2a+1)

in every variable (2a+1 is never zero, so no logarithms arise).  The
principal specialization z_1 = ... = z_n = z of the free energies, summed
over 2g + n - 2 = m - 1 with weights 1/n!, assembles the order-m wave
coefficient S_m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .curves import CurveSpec
from .errors import StabilityError
from .laurent import LaurentPolynomial, RationalExpression
from .memo import MemoStore
from .recursion import BACKEND_CLOSED, MultiDifferential, compute_w, is_stable


@dataclass(frozen=True)
class FreeEnergy:
    """Symmetric n-fold antiderivative of w_{g,n}; odd exponents throughout."""

    g: int
    n: int
    curve: CurveSpec
    poly: LaurentPolynomial


def integrate_symmetric(w: MultiDifferential) -> FreeEnergy:
    poly = w.poly
    for var in range(w.n):
        poly = poly.antiderivative(var)
    return FreeEnergy(w.g, w.n, w.curve, poly)


def free_energy(curve: CurveSpec, g: int, n: int, store: MemoStore | None = None,
                backend: str = BACKEND_CLOSED) -> FreeEnergy:
    return integrate_symmetric(compute_w(curve, g, n, store, backend))


def stable_pairs_at_order(m: int) -> list[tuple[int, int]]:
    """All stable (g, n) with 2g + n - 2 = m - 1, g descending."""
    pairs = []
    for g in range(0, (m + 1) // 2 + 1):
        n = m + 1 - 2 * g
        if is_stable(g, n):
            pairs.append((g, n))
    return sorted(pairs, reverse=True)


def s_coefficient(curve: CurveSpec, m: int, store: MemoStore | None = None,
                  backend: str = BACKEND_CLOSED) -> LaurentPolynomial:
    """The order-m wave coefficient assembled from free energies, m >= 2."""
    if m < 2:
        raise StabilityError("wave coefficients start at order m = 2")
    if store is None:
        store = MemoStore()
    total = LaurentPolynomial.zero(1)
    for g, n in stable_pairs_at_order(m):
        f = free_energy(curve, g, n, store, backend)
        total = total + f.poly.specialize().scale(Fraction(1, factorial(n)))
    return total


def s01_prime(curve: CurveSpec) -> tuple[RationalExpression, RationalExpression]:
    """The derivatives of the two leading wave exponents, on the (x, y) chart.

    Slot 0 is x, slot 1 is y (with y**2 = x**2 - c**2, resp. y**2 = x).  The
    leading one is -y for both curves; the subleading one is rational in x
    alone.  The exponents themselves involve logarithms and stay out of
    scope; only these derivatives are ever needed.
    """
    minus_y = RationalExpression(LaurentPolynomial(2, {(0, 1): -1}))
    if curve.is_harmonic:
        den = LaurentPolynomial(2, {(2, 0): 2, (0, 0): -2 * curve.c2})
        sub = RationalExpression(LaurentPolynomial(2, {(1, 0): -1}), den)
    else:
        sub = RationalExpression(
            LaurentPolynomial(2, {(0, 0): -1}), LaurentPolynomial(2, {(1, 0): 4})
        )
    return minus_y, sub
