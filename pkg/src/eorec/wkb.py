"""Wave-coefficient recursion and energy quantization: the independent oracle.

The quantization ansatz Psi = exp sum_m hbar**(m-1) S_m(x) turns the
second-order equation into a first-order recursion for the derivatives
S_m'.  Rewritten on the z-chart of the harmonic curve it closes over
Laurent polynomials in z with exact coefficients:

    dS_m/dz = eps * [ z**2/(16 c**2 (z**2-1)**3) * A**2 S_{m-1}
                      + (z**2-1)**3/(16 c**2 z**2) * sum_{i+j=m} S_i' S_j' ],

with A = (z**2-1)**3 z**-2 d/dz, the sum over i, j >= 2, and the order-2
seed S_2 = eps (5 - 9z**2 - 9z**4 + 5z**6) / (192 c**2 z**3).  The A**2
term is divisible by (z**2-1)**3; that division is performed exactly and a
remainder aborts the run.  On the Airy curve the same elimination in the
coordinate y gives

    dS_m/dy = (1/4) y**-2 d2S_{m-1}/dy2 - (1/2) y**-3 dS_{m-1}/dy
              + (1/4) y**-2 sum_{i+j=m} S_i' S_j',

seeded with S_2 = -5/(48 y**3).  Each new coefficient is antidifferentiated
with zero constant; a z**-1 term on the right-hand side can never occur and
raises LogTermError if it does.

This module never touches the residue recursion except through the shared
algebra, so agreement with the free-energy assembly is a genuine two-route
check: exact at even orders, up to an additive constant at odd orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .curves import CurveSpec
from .errors import LogTermError, MismatchError
from .expansion import residue_at_infinity, sqrt_series
from .free_energy import free_energy, s_coefficient, stable_pairs_at_order
from .laurent import LaurentPolynomial, RationalExpression, exact_div
from .memo import MemoStore
from .recursion import BACKEND_CLOSED


@dataclass
class WkbSeries:
    """Wave coefficients S_2, S_3, ... on one curve, each with zero constant."""

    curve: CurveSpec
    coefficients: list[LaurentPolynomial]

    def order(self) -> int:
        return len(self.coefficients) + 1

    def s(self, m: int) -> LaurentPolynomial:
        if m < 2 or m > self.order():
            raise ValueError(f"series holds orders 2..{self.order()}, not {m}")
        return self.coefficients[m - 2]


def initial_series(curve: CurveSpec) -> WkbSeries:
    if curve.is_harmonic:
        c = Fraction(curve.eps, 192) / curve.c2
        s2 = LaurentPolynomial(1, {(-3,): 5 * c, (-1,): -9 * c, (1,): -9 * c, (3,): 5 * c})
    else:
        s2 = LaurentPolynomial(1, {(-3,): Fraction(-5, 48)})
    return WkbSeries(curve, [s2])


def _a_operator(p: LaurentPolynomial) -> LaurentPolynomial:
    """(z**2 - 1)**3 z**-2 d/dz."""
    cube = LaurentPolynomial(1, {(2,): 1, (0,): -1}) ** 3
    return (cube * p.diff(0)).times_monomial((-2,))


def wkb_extend(series: WkbSeries, target_m: int) -> WkbSeries:
    """Extend the series through order target_m, one order at a time."""
    curve = series.curve
    coeffs = list(series.coefficients)
    cube = LaurentPolynomial(1, {(2,): 1, (0,): -1}) ** 3
    while len(coeffs) + 1 < target_m:
        m = len(coeffs) + 2
        prev = coeffs[-1]
        cross = LaurentPolynomial.zero(1)
        for i in range(2, m - 1):
            j = m - i
            cross = cross + coeffs[i - 2].diff(0) * coeffs[j - 2].diff(0)
        if curve.is_harmonic:
            scale = Fraction(curve.eps, 16) / curve.c2
            lead = exact_div(_a_operator(_a_operator(prev)), cube, 0)
            lead = lead.times_monomial((2,))
            rhs = (lead + cube * cross.times_monomial((-2,))).scale(scale)
        else:
            rhs = (
                prev.diff(0).diff(0).times_monomial((-2,), Fraction(1, 4))
                + prev.diff(0).times_monomial((-3,), Fraction(-1, 2))
                + cross.times_monomial((-2,), Fraction(1, 4))
            )
        if rhs.coefficient((-1,)) != 0:
            raise LogTermError(f"derivative of order-{m} coefficient has a z**-1 term")
        coeffs.append(rhs.antiderivative(0))
    return WkbSeries(curve, coeffs)


@dataclass(frozen=True)
class WkbComparison:
    """Outcome of matching the assembled S_m against the oracle S_m."""

    m: int
    exact: bool
    offset: Fraction


def compare_with_assembly(curve: CurveSpec, m: int, store: MemoStore | None = None,
                          backend: str = BACKEND_CLOSED) -> WkbComparison:
    """Assembled-vs-oracle comparison at order m.

    Even orders must agree exactly; odd orders may differ by a constant,
    which is reported.  Any non-constant difference is fatal.
    """
    if store is None:
        store = MemoStore()
    assembled = s_coefficient(curve, m, store, backend)
    oracle = wkb_extend(initial_series(curve), max(m, 2)).s(m)
    diff = assembled - oracle
    if not diff.is_constant():
        raise MismatchError(
            f"order-{m} coefficients differ by more than a constant: "
            f"{diff.to_plain()}"
        )
    return WkbComparison(m, diff.is_zero, diff.constant_value())


# ---------------------------------------------------------------------------
# Bohr-Sommerfeld quantization from residues at infinity.
# ---------------------------------------------------------------------------

def energy_residues(curve: CurveSpec) -> tuple[Fraction, Fraction]:
    """(Res y dx, Res x dx / y**2) at the point x = infinity on the sheet
    where y is the positive branch of sqrt(x**2 - c**2).

    The first value is c**2/2 and drives the quantization condition; the
    second is -1 independently of c**2.
    """
    curve.require_harmonic()
    x2 = LaurentPolynomial(1, {(2,): 1})
    y2_over_x2 = RationalExpression(
        LaurentPolynomial(1, {(2,): 1, (0,): -curve.c2}), x2
    )
    # y dx = sqrt(1 - c**2 u**2) * (-u**-3) du in the local parameter u = 1/x,
    # so the residue is minus the u**2 series coefficient of the square root.
    root = sqrt_series(y2_over_x2, 0, "infinity", 2)
    res_y_dx = -root.coefficient((2,))
    x_over_y2 = RationalExpression(
        LaurentPolynomial(1, {(1,): 1}),
        LaurentPolynomial(1, {(2,): 1, (0,): -curve.c2}),
    )
    res_x_dx = residue_at_infinity(x_over_y2, 0).constant_value()
    return res_y_dx, res_x_dx


def subleading_contour_contribution(curve: CurveSpec) -> Fraction:
    """The m = 1 term of the quantization integral: half of Res x dx / y**2."""
    return energy_residues(curve)[1] / 2


def quantized_level(c2, hbar) -> Fraction:
    """Quantum number selected by c**2/2 = (n + 1/2) hbar.

    The result need not be an integer; admissibility is the caller's call.
    """
    c2 = Fraction(c2)
    hbar = Fraction(hbar)
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    return c2 / (2 * hbar) - Fraction(1, 2)


def energy_level(n, hbar, omega=1) -> Fraction:
    """Inverse map: E_n = (n + 1/2) hbar omega."""
    return (Fraction(n) + Fraction(1, 2)) * Fraction(hbar) * Fraction(omega)


# ---------------------------------------------------------------------------
# Consistency of the free-energy recursion with the wave recursion
# (two assemblies of the same right-hand side, summed at fixed order).
# ---------------------------------------------------------------------------

def _fold_tail(p: LaurentPolynomial, keep: int) -> LaurentPolynomial:
    """Keep the first ``keep`` slots, fold all remaining ones into a new last
    slot (set those variables equal)."""
    out: dict = {}
    zero = Fraction(0)
    for exp, c in p.terms.items():
        e = exp[:keep] + (sum(exp[keep:]),)
        s = out.get(e, zero) + c
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return LaurentPolynomial._raw(keep + 1, out)


def _ds_at_z(poly: LaurentPolynomial) -> LaurentPolynomial:
    """d/ds F(s, z, ..., z) at s = z, from the n-variable polynomial."""
    return _fold_tail(poly, 1).diff(0).identify(0, 1)


def _dsdt_at_z(poly: LaurentPolynomial) -> LaurentPolynomial:
    """d2/(ds dt) F(s, t, z, ..., z) at s = t = z."""
    return _fold_tail(poly, 2).diff(0).diff(1).identify(0, 2).identify(0, 1)


def _a2_at_z(poly: LaurentPolynomial) -> LaurentPolynomial:
    """(A_s)**2 F(s, z, ..., z) at s = z, with A_s = (s**2-1)**3 s**-2 d/ds."""
    two = _fold_tail(poly, 1)
    cube = LaurentPolynomial(2, {(2, 0): 1, (0, 0): -1}) ** 3

    def a_op(p):
        return (cube * p.diff(0)).times_monomial((-2, 0))

    return a_op(a_op(two)).identify(0, 1)


def free_energy_recursion_sides(curve: CurveSpec, m: int,
                                store: MemoStore | None = None,
                                backend: str = BACKEND_CLOSED
                                ) -> tuple[LaurentPolynomial, LaurentPolynomial, LaurentPolynomial]:
    """Three assemblies of the order-m derivative identity, m >= 3.

    Returns (lhs, rhs_free_energy, rhs_wave): the summed left-hand side
    sum 1/(n-1)! d/ds F_{g,n}|, the right-hand side grouped as in the
    free-energy recursion, and the same value regrouped as in the wave
    recursion.  The first two agree for either sign choice; the wave
    grouping is normalized to eps = -1.
    """
    if m < 3:
        raise ValueError("the derivative identity starts at order 3")
    if store is None:
        store = MemoStore()
    curve.require_harmonic()

    cache: dict[tuple[int, int], LaurentPolynomial] = {}

    def F(g: int, n: int) -> LaurentPolynomial:
        if (g, n) not in cache:
            cache[(g, n)] = free_energy(curve, g, n, store, backend).poly
        return cache[(g, n)]

    pairs = stable_pairs_at_order(m)
    cube_z = LaurentPolynomial(1, {(2,): 1, (0,): -1}) ** 3
    one_minus_cube = -cube_z                       # (1 - z**2)**3
    eps_over = Fraction(curve.eps, 16) / curve.c2

    lhs = LaurentPolynomial.zero(1)
    for g, n in pairs:
        lhs = lhs + _ds_at_z(F(g, n)).scale(Fraction(1, factorial(n - 1)))

    # Grouping 1: term-by-term image of the free-energy recursion.
    rhs_f = LaurentPolynomial.zero(1)
    for g, n in pairs:
        w = Fraction(1, factorial(n - 1))
        if g >= 1:
            rhs_f = rhs_f + (one_minus_cube * _dsdt_at_z(F(g - 1, n + 1))
                             ).times_monomial((-2,), -eps_over * w)
        for g1 in range(g + 1):
            for n1 in range(0, n):
                g2, n2 = g - g1, n - 1 - n1
                if 2 * g1 - 2 + n1 + 1 <= 0 or 2 * g2 - 2 + n2 + 1 <= 0:
                    continue
                coef = -eps_over * w * Fraction(
                    factorial(n - 1), factorial(n1) * factorial(n2)
                )
                prod = _ds_at_z(F(g1, n1 + 1)) * _ds_at_z(F(g2, n2 + 1))
                rhs_f = rhs_f + (one_minus_cube * prod).times_monomial((-2,), coef)
        if n >= 2:
            block = exact_div(_a2_at_z(F(g, n - 1)), cube_z, 0)
            rhs_f = rhs_f + block.times_monomial((2,), eps_over * w * (n - 1))

    # Grouping 2: the wave-recursion form of the same right-hand side
    # (eps = -1 normalization), with shifted summation bookkeeping.
    minus_over = Fraction(-1, 16) / curve.c2
    rhs_w = LaurentPolynomial.zero(1)
    for g, n in pairs:
        w = Fraction(1, factorial(n - 1))
        if g >= 1:
            rhs_w = rhs_w + (cube_z * _dsdt_at_z(F(g - 1, n + 1))
                             ).times_monomial((-2,), minus_over * w)
        if n >= 2:
            block = exact_div(_a2_at_z(F(g, n - 1)), cube_z, 0)
            rhs_w = rhs_w + block.times_monomial(
                (2,), minus_over * Fraction(1, factorial(n - 2))
            )
        for g1 in range(g + 1):
            for n1 in range(1, n + 1):
                g2, n2 = g - g1, n + 1 - n1
                if n2 < 1:
                    continue
                if 2 * g1 - 2 + n1 <= 0 or 2 * g2 - 2 + n2 <= 0:
                    continue
                coef = minus_over * Fraction(1, factorial(n1 - 1) * factorial(n2 - 1))
                prod = _ds_at_z(F(g1, n1)) * _ds_at_z(F(g2, n2))
                rhs_w = rhs_w + (cube_z * prod).times_monomial((-2,), coef)
    return lhs, rhs_f, rhs_w
