"""Exact Laurent expansion of rational expressions at 0 and at infinity.

The expansion of ``num/den`` in a chosen variable works over the ring of
Laurent polynomials in the remaining (spectator) variables.  Writing

    den = c0 * M0 * var**v + (higher order in var)

with ``c0 * M0`` a single spectator monomial, the geometric series

    num/den = num * (c0*M0)**-1 * var**-v * sum_i (-h)**i,
    h = (den - c0*M0*var**v) * (c0*M0)**-1 * var**-v

has strictly increasing var-order in i, so any finite truncation is exact.
If the lowest-order coefficient of ``den`` is not a monomial the expansion
would need spectator fractions and NonExpandableError is raised.

Expansions at infinity substitute u = 1/var (an exponent sign flip) and
expand at u = 0.  Truncation orders are always derived from the requested
target and the pole order, never guessed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal

from .errors import NonExpandableError, ShapeError
from .laurent import LaurentPolynomial, RationalExpression

Point = Literal["zero", "infinity"]


def _truncated_mul(p: LaurentPolynomial, q: LaurentPolynomial, var: int,
                   upto: int) -> LaurentPolynomial:
    """Product with every term of var-exponent > upto dropped."""
    out: dict = {}
    zero = Fraction(0)
    for ea, ca in p.terms.items():
        for eb, cb in q.terms.items():
            k = ea[var] + eb[var]
            if k > upto:
                continue
            exp = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(exp, zero) + ca * cb
            if s:
                out[exp] = s
            elif exp in out:
                del out[exp]
    return LaurentPolynomial._raw(p.arity, out)


def _drop_above(p: LaurentPolynomial, var: int, upto: int) -> LaurentPolynomial:
    return LaurentPolynomial._raw(
        p.arity, {e: c for e, c in p.terms.items() if e[var] <= upto}
    )


def _expand(num: LaurentPolynomial, den: LaurentPolynomial, var: int,
            upto: int) -> LaurentPolynomial:
    """All terms of the Laurent expansion of num/den at var=0 with exponent <= upto."""
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return LaurentPolynomial.zero(num.arity)

    v = den.min_exponent(var)
    lowest = {e: c for e, c in den.terms.items() if e[var] == v}
    if len(lowest) != 1:
        raise NonExpandableError(
            "lowest denominator coefficient involves spectators non-invertibly"
        )
    ((lexp, lcoef),) = lowest.items()
    inv_exp = tuple(-e for e in lexp)
    inv_coef = 1 / lcoef

    rest = LaurentPolynomial._raw(
        den.arity, {e: c for e, c in den.terms.items() if e[var] > v}
    )
    h = rest.times_monomial(inv_exp, inv_coef)          # var-order >= 1
    neg_h = -h
    acc = _drop_above(num.times_monomial(inv_exp, inv_coef), var, upto)
    total = acc
    while not acc.is_zero:
        acc = _truncated_mul(acc, neg_h, var, upto)
        total = total + acc
    return total


def _at_point(expr: RationalExpression, var: int, point: Point) -> RationalExpression:
    if point == "infinity":
        return expr.negate_var(var)
    if point != "zero":
        raise ValueError(f"unknown expansion point {point!r}")
    return expr


def series_prefix(expr: RationalExpression, var: int, point: Point,
                  order: int) -> LaurentPolynomial:
    """Truncated expansion at the point, keeping local exponents <= order.

    At infinity the result is a polynomial in the local parameter u = 1/var,
    carried in the same variable slot.
    """
    local = _at_point(expr, var, point)
    return _expand(local.num, local.den, var, order)


def series_coefficient(expr: RationalExpression, var: int, point: Point,
                       target: int) -> LaurentPolynomial:
    """Exact coefficient of (local parameter)**target in the expansion.

    The result is a Laurent polynomial in the spectator variables; the
    expansion variable's slot is kept with exponent zero.
    """
    prefix = series_prefix(expr, var, point, target)
    out: dict = {}
    for exp, c in prefix.terms.items():
        if exp[var] == target:
            e = list(exp)
            e[var] = 0
            out[tuple(e)] = c
    return LaurentPolynomial._raw(expr.arity, out)


def residue_at_zero(expr: RationalExpression, var: int) -> LaurentPolynomial:
    """Residue at var=0 of expr*dvar, as a spectator polynomial."""
    return series_coefficient(expr, var, "zero", -1)


def residue_at_infinity(expr: RationalExpression, var: int) -> LaurentPolynomial:
    """Residue at var=inf of expr*dvar.

    With u = 1/var one has dvar = -du/u**2, so the residue is minus the
    coefficient of u**1 in the expansion of expr at infinity.
    """
    return -series_coefficient(expr, var, "infinity", 1)


def _half_binomial(m: int) -> Fraction:
    """Binomial coefficient (1/2 choose m), exactly."""
    c = Fraction(1)
    for i in range(m):
        c *= Fraction(1, 2) - i
        c /= i + 1
    return c


def sqrt_series(expr: RationalExpression, var: int, point: Point,
                order: int) -> LaurentPolynomial:
    """Binomial expansion of sqrt(expr) at the point, to local order <= order.

    Requires expr = 1 + (terms vanishing at the point); otherwise ShapeError.
    """
    s = series_prefix(expr, var, point, order)
    one = LaurentPolynomial.constant(expr.arity, 1)
    h = s - one
    if (not h.is_zero) and h.min_exponent(var) < 1:
        raise ShapeError("series does not start at 1 + (vanishing terms)")
    result = one
    power = one
    for m in range(1, order + 1):
        power = _truncated_mul(power, h, var, order)
        if power.is_zero:
            break
        result = result + power.scale(_half_binomial(m))
    return result
