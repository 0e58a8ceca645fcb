"""Spectral curve data: coordinates, initial differentials, recursion kernels.

Two curves are supported:

* the Airy curve y**2 = x, worked in the coordinate y (one ramification
  point at y = 0, involution y -> -y);
* the harmonic oscillator curve y**2 = x**2 - c**2, worked in the
  rational coordinate z in which

      x = -c (z**2+1)/(z**2-1),   y = eps * 2cz/(z**2-1),
      dx = 4cz/(z**2-1)**2 dz,

  with ramification points at z = 0 and z = infinity and involution
  z -> -z.

The parameter c itself is never represented: every in-scope quantity
depends on c**2 only, which is stored as an exact rational.  Coordinate
data is therefore carried as x/c, y/c and dx/c, which are honest rational
functions of z with rational coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OddPowerOfCError
from .laurent import LaurentPolynomial, RationalExpression

AIRY = "airy"
HARMONIC = "ho"


@dataclass(frozen=True)
class CurveSpec:
    """Curve selector plus the harmonic-oscillator parameters c**2 and eps."""

    kind: str
    c2: Fraction = Fraction(2)
    eps: int = -1

    def __post_init__(self):
        if self.kind not in (AIRY, HARMONIC):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        object.__setattr__(self, "c2", Fraction(self.c2))
        if self.kind == HARMONIC:
            if self.c2 == 0:
                raise ValueError("c**2 = 0 degenerates the two ramification points")
            if self.eps not in (1, -1):
                raise ValueError("eps must be +1 or -1")
        else:
            # Normalize so equal Airy specs compare (and cache) equal.
            object.__setattr__(self, "c2", Fraction(0))
            object.__setattr__(self, "eps", 1)

    @classmethod
    def airy(cls) -> "CurveSpec":
        return cls(AIRY)

    @classmethod
    def harmonic(cls, c2=Fraction(2), eps: int = -1) -> "CurveSpec":
        return cls(HARMONIC, Fraction(c2), eps)

    @property
    def is_harmonic(self) -> bool:
        return self.kind == HARMONIC

    def require_harmonic(self) -> None:
        if not self.is_harmonic:
            raise ValueError("operation requires the harmonic oscillator curve")

    def key(self) -> tuple:
        return (self.kind, str(self.c2), self.eps)


@dataclass(frozen=True)
class CoordinateMap:
    """The z-parametrization of the harmonic oscillator curve, scaled by 1/c.

    Fields hold x/c, y/c and (dx/dz)/c so that all coefficients stay
    rational; identities involving c**2 pick up the stored parameter.
    """

    x_over_c: RationalExpression
    y_over_c: RationalExpression
    dx_over_c: RationalExpression


def _p1(terms) -> LaurentPolynomial:
    return LaurentPolynomial(1, terms)


def _p2(terms) -> LaurentPolynomial:
    return LaurentPolynomial(2, terms)


def coordinate_map(curve: CurveSpec) -> CoordinateMap:
    curve.require_harmonic()
    zsq_minus_1 = _p1({(2,): 1, (0,): -1})
    return CoordinateMap(
        x_over_c=RationalExpression(_p1({(2,): -1, (0,): -1}), zsq_minus_1),
        y_over_c=RationalExpression(_p1({(1,): 2 * curve.eps}), zsq_minus_1),
        dx_over_c=RationalExpression(_p1({(1,): 4}), zsq_minus_1 * zsq_minus_1),
    )


def initial_w01(curve: CurveSpec) -> RationalExpression:
    """w_{0,1} = y dx as a coefficient of dz (harmonic) or dy (Airy)."""
    if curve.is_harmonic:
        num = _p1({(2,): 8 * curve.eps * curve.c2})
        den = _p1({(2,): 1, (0,): -1}) ** 3
        return RationalExpression(num, den)
    return RationalExpression(_p1({(2,): 2}))


def initial_w02() -> RationalExpression:
    """The Bergman kernel 1/(z1 - z2)**2, coefficient of dz1 dz2."""
    den = _p2({(1, 0): 1, (0, 1): -1}) ** 2
    return RationalExpression(_p2({(0, 0): 1}), den)


def w02_involution_difference() -> RationalExpression:
    """w_{0,2}(-z, w) - w_{0,2}(z, w) as a coefficient of dz dw.

    Equals -2 (z**2 + w**2) / (z**2 - w**2)**2; this is the unstable
    correction entering the recursion.
    """
    num = _p2({(2, 0): -2, (0, 2): -2})
    den = _p2({(2, 0): 1, (0, 2): -1}) ** 2
    return RationalExpression(num, den)


def kernel(curve: CurveSpec) -> RationalExpression:
    """The recursion kernel, coefficient of dz1/dz.

    Variable slot 0 is the residue variable, slot 1 the outgoing one.
    Harmonic: (eps/16c**2) (1-z**2)**3 / ((z1**2 - z**2) z).
    Airy:     (1/4) / ((y**2 - y1**2) y).
    """
    if curve.is_harmonic:
        num = (_p2({(2, 0): -1, (0, 0): 1}) ** 3).scale(
            Fraction(curve.eps) / (16 * curve.c2)
        )
        den = _p2({(0, 2): 1, (2, 0): -1}) * _p2({(1, 0): 1})
        return RationalExpression(num, den)
    num = _p2({(0, 0): Fraction(1, 4)})
    den = _p2({(2, 0): 1, (0, 2): -1}) * _p2({(1, 0): 1})
    return RationalExpression(num, den)


def kernel_from_initial_data(curve: CurveSpec) -> RationalExpression:
    """Assemble the kernel from w_{0,1}, w_{0,2} and the involution z -> -z.

    K(z, z1) = (1/2) * [1/(z - z1) + 1/(z + z1)] / (2 y(z) dx(z)/dz), using
    that the z-antiderivative of w_{0,2}(., z1) between the involuted points
    is 1/(z - z1) - 1/(-z - z1).  Exists for consistency checks against the
    direct formula.
    """
    curve.require_harmonic()
    cm = coordinate_map(curve)
    half_sum = RationalExpression(
        _p2({(0, 0): 1}), _p2({(1, 0): 1, (0, 1): -1})
    ) + RationalExpression(_p2({(0, 0): 1}), _p2({(1, 0): 1, (0, 1): 1}))
    y_dx = cm.y_over_c * cm.dx_over_c * curve.c2   # = y(z) * dx/dz
    y_dx2 = RationalExpression(
        y_dx.num.lift(2, (0,)), y_dx.den.lift(2, (0,))
    )
    return RationalExpression(
        half_sum.num * y_dx2.den, half_sum.den * y_dx2.num.scale(4)
    )


def to_z_coordinates(expr: RationalExpression, curve: CurveSpec) -> RationalExpression:
    """Rewrite a rational function of (x, c**2) on the z-coordinate chart.

    The input has two slots: slot 0 is x, slot 1 counts powers of c**2.
    Substituting x**2 = c**2 (z**2+1)**2/(z**2-1)**2 keeps all coefficients
    rational; any odd power of x would drag in a bare factor of c and is
    rejected with OddPowerOfCError.
    """
    curve.require_harmonic()
    if expr.arity != 2:
        raise ValueError("expected a rational expression in (x, c**2)")
    num = _substitute_x(expr.num, curve)
    den = _substitute_x(expr.den, curve)
    return RationalExpression(num.num * den.den, num.den * den.num)


def _substitute_x(p: LaurentPolynomial, curve: CurveSpec) -> RationalExpression:
    """x**(2k) (c**2)**b  ->  c2**(k+b) (z**2+1)**(2k) / (z**2-1)**(2k)."""
    if p.is_zero:
        return RationalExpression(LaurentPolynomial.zero(1))
    half = []
    for exp, c in p.terms.items():
        if exp[0] % 2:
            raise OddPowerOfCError(
                "odd power of x has no rational image over the parameter c**2"
            )
        half.append((exp[0] // 2, exp[1], c))
    kmax = max(0, max(k for k, _, _ in half))
    kmin = min(0, min(k for k, _, _ in half))
    plus = _p1({(2,): 1, (0,): 1})
    minus = _p1({(2,): 1, (0,): -1})
    num = LaurentPolynomial.zero(1)
    for k, b, c in half:
        piece = LaurentPolynomial.constant(1, c * curve.c2 ** (k + b))
        piece = piece * plus ** (2 * (k - kmin)) * minus ** (2 * (kmax - k))
        num = num + piece
    den = plus ** (-2 * kmin) * minus ** (2 * kmax)
    return RationalExpression(num, den)


def reduce_on_curve(p: LaurentPolynomial, curve: CurveSpec) -> LaurentPolynomial:
    """Reduce even powers of y using the defining curve relation.

    Input lives in the (x, y) chart (slot 0 is x, slot 1 is y); every
    y**(2m) with m >= 0 is replaced by (x**2 - c**2)**m (harmonic) or
    x**m (Airy), leaving y-exponents in {0, 1}.
    """
    if p.arity != 2:
        raise ValueError("expected a polynomial in (x, y)")
    if curve.is_harmonic:
        ysq = _p2({(2, 0): 1, (0, 0): -curve.c2})
    else:
        ysq = _p2({(1, 0): 1})
    out = LaurentPolynomial.zero(2)
    for exp, c in p.terms.items():
        xk, yk = exp
        if yk < 0:
            raise ValueError("negative powers of y are not reducible here")
        m, r = divmod(yk, 2)
        out = out + LaurentPolynomial.monomial(2, (xk, r), c) * ysq ** m
    return out
