"""The residue recursion producing the stable multi-differentials w_{g, n}.

Conventions.  A MultiDifferential stores the coefficient polynomial P of
dz1...dzn.  The recursion distinguishes z1: the right-hand side is a residue
in an auxiliary variable z taken at the ramification points (z = 0 and
z = infinity for the harmonic curve, y = 0 only for Airy), and the three
contributions inside the kernel are

    (a)  P_{g-1, n+1}(z, z, z2, ..., zn)            [self pairing],
    (b)  sum of stable products P_{g1}(z, z_I) P_{g2}(z, z_J),
    (c)  per spectator j, P_{g, n-1}(z, rest) paired with the involution
         difference of the Bergman kernel, -2 (z**2 + zj**2)/(z**2 - zj**2)**2.

Groups (a) and (b) enter with a minus sign (the involuted leg contributes
d(-z) = -dz); group (c) carries its sign inside the paired factor.  Because
every stable P is even in each variable, groups reduce to even monomials
z**(-2k) whose kernel residues have closed forms:

    basic(k)    = (eps/16c**2) (1 - z1**2)**3 / z1**(2k+2)          [harmonic]
                = -1/(4 y1**(2k+2))                                  [Airy]
    unstable(k) = the three-part bracket in z1, zj                   [harmonic]

The series backend recomputes both residues by exact Laurent expansion and
is the reference implementation; the closed forms are the fast path, and any
disagreement is fatal.  The first stable generation (2g - 2 + n = 1) falls
outside the even-monomial pattern because bare Bergman factors appear there;
those two cases are evaluated by direct series residues of the full rational
integrand, identically in both backends.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .curves import AIRY, CurveSpec, kernel
from .errors import InvariantViolation, StabilityError
from .expansion import residue_at_infinity, residue_at_zero
from .laurent import LaurentPolynomial, RationalExpression
from .memo import MemoStore

BACKEND_CLOSED = "closed"
BACKEND_SERIES = "series"
_BACKENDS = (BACKEND_CLOSED, BACKEND_SERIES)


@dataclass(frozen=True)
class MultiDifferential:
    """A stable (g, n) differential: symmetric, even-exponent coefficient poly."""

    g: int
    n: int
    curve: CurveSpec
    poly: LaurentPolynomial


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n > 0


def _require_stable(g: int, n: int) -> None:
    if not is_stable(g, n):
        raise StabilityError(f"(g, n) = ({g}, {n}) is outside the stable range")


# ---------------------------------------------------------------------------
# Residues of the kernel against even powers, closed forms.
# ---------------------------------------------------------------------------

_basic_cache: dict[tuple, LaurentPolynomial] = {}
_unstable_cache: dict[tuple, LaurentPolynomial] = {}


def _one_minus_sq_cubed(arity: int, var: int) -> LaurentPolynomial:
    e2 = [0] * arity
    e2[var] = 2
    return LaurentPolynomial(arity, {tuple(e2): -1, (0,) * arity: 1}) ** 3


def residue_basic(curve: CurveSpec, k: int, backend: str = BACKEND_CLOSED) -> LaurentPolynomial:
    """Residue sum of K(z, z1) (dz)**2 / z**(2k), as a polynomial in z1."""
    key = curve.key() + (k, backend)
    cached = _basic_cache.get(key)
    if cached is not None:
        return cached
    if backend == BACKEND_CLOSED:
        if curve.is_harmonic:
            pref = Fraction(curve.eps) / (16 * curve.c2)
            poly = _one_minus_sq_cubed(1, 0).times_monomial((-2 * k - 2,), pref)
        elif k >= 0:
            poly = LaurentPolynomial.monomial(1, (-2 * k - 2,), Fraction(-1, 4))
        else:
            # Only y = 0 contributes on the Airy curve; the integrand is
            # regular there once 2k < 0.
            poly = LaurentPolynomial.zero(1)
    elif backend == BACKEND_SERIES:
        poly = _series_residue_basic(curve, k)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    _basic_cache[key] = poly
    return poly


def residue_unstable(curve: CurveSpec, k: int, backend: str = BACKEND_CLOSED) -> LaurentPolynomial:
    """Residue sum of K(z, z1) * (-2)(z**2+zj**2)/(z**2-zj**2)**2 * (dz)**2/z**(2k).

    Returned as a polynomial in (z1, zj).  The closed form exists for the
    harmonic curve; the Airy analogue always goes through the series backend.
    """
    key = curve.key() + (k, backend)
    cached = _unstable_cache.get(key)
    if cached is not None:
        return cached
    if backend == BACKEND_CLOSED and curve.is_harmonic:
        poly = _closed_unstable_harmonic(curve, k)
    elif backend in _BACKENDS:
        poly = _series_residue_unstable(curve, k)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    _unstable_cache[key] = poly
    return poly


def _closed_unstable_harmonic(curve: CurveSpec, k: int) -> LaurentPolynomial:
    cube = _one_minus_sq_cubed(2, 0)           # (1 - z1**2)**3
    total = LaurentPolynomial.zero(2)
    for s in range(0, 1 - k + 1):              # empty when k > 1
        total = total + cube.times_monomial((2 * (1 - k - s) - 6, 2 * s), 2 * s + 1)
    for t in range(0, k - 3 + 1):              # empty when k < 3
        total = total + cube.times_monomial((-2 * (k - t) - 2, -2 * t - 2), 2 * t + 1)
    quad = LaurentPolynomial(2, {(4, 0): 3, (2, 0): -3, (0, 0): 1})
    lin = LaurentPolynomial(2, {(2, 0): -3, (0, 0): 1})
    total = total + quad.times_monomial((-6, -2 * (k - 2) - 2), 2 * k - 3)
    total = total + lin.times_monomial((-4, -2 * (k - 1) - 2), 2 * k - 1)
    total = total + LaurentPolynomial.monomial(2, (-2, -2 * k - 2), 2 * k + 1)
    return total.scale(Fraction(-curve.eps, 8) / curve.c2)


def unstable_split_closed(curve: CurveSpec, k: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """The two single-point pieces (at z=0 and z=infinity) of the unstable
    residue, in the closed form with discrete Heaviside factors H(n >= 0).

    Their sum recombines into residue_unstable for every integer k.
    """
    curve.require_harmonic()
    pref = Fraction(-curve.eps, 8) / curve.c2
    cube = _one_minus_sq_cubed(2, 0)
    quad = LaurentPolynomial(2, {(4, 0): 3, (2, 0): -3, (0, 0): 1})
    lin = LaurentPolynomial(2, {(2, 0): -3, (0, 0): 1})

    at_zero = LaurentPolynomial.zero(2)
    for p in range(0, k - 3 + 1):
        at_zero = at_zero + cube.times_monomial((-2 * k + 2 * p - 2, -2 * p - 2), 2 * p + 1)
    if k >= 0:
        at_zero = at_zero + LaurentPolynomial.monomial(2, (-2, -2 * k - 2), 2 * k + 1)
    if k >= 1:
        at_zero = at_zero + lin.times_monomial((-4, -2 * k), 2 * k - 1)
    if k >= 2:
        at_zero = at_zero + quad.times_monomial((-6, -2 * k + 2), 2 * k - 3)

    at_inf = LaurentPolynomial.zero(2)
    for p in range(0, 1 - k + 1):
        at_inf = at_inf + cube.times_monomial((-2 * p - 2 * k - 4, 2 * p), 2 * p + 1)
    if -1 - k >= 0:
        at_inf = at_inf + LaurentPolynomial.monomial(2, (-2, -2 * k - 2), 2 * k + 1)
    if -k >= 0:
        at_inf = at_inf + lin.times_monomial((-4, -2 * k), 2 * k - 1)
    if 1 - k >= 0:
        at_inf = at_inf + quad.times_monomial((-6, -2 * k + 2), 2 * k - 3)

    return at_zero.scale(pref), at_inf.scale(pref)


# ---------------------------------------------------------------------------
# Residues of the kernel against even powers, series backend.
# ---------------------------------------------------------------------------

def _kernel_num_den(curve: CurveSpec, arity: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """Kernel numerator and denominator lifted to (z, z1, extra spectators)."""
    expr = kernel(curve)
    return expr.num.lift(arity, (0, 1)), expr.den.lift(arity, (0, 1))


def _residue_sum(curve: CurveSpec, expr: RationalExpression, var: int) -> LaurentPolynomial:
    total = residue_at_zero(expr, var)
    if curve.is_harmonic:
        total = total + residue_at_infinity(expr, var)
    return total


def _series_residue_basic(curve: CurveSpec, k: int) -> LaurentPolynomial:
    num, den = _kernel_num_den(curve, 2)
    den = den.times_monomial((2 * k, 0))
    return _residue_sum(curve, RationalExpression(num, den), 0).drop_var(0)


def _series_residue_unstable(curve: CurveSpec, k: int) -> LaurentPolynomial:
    num, den = _kernel_num_den(curve, 3)
    pair_num = LaurentPolynomial(3, {(2, 0, 0): -2, (0, 0, 2): -2})
    pair_den = LaurentPolynomial(3, {(2, 0, 0): 1, (0, 0, 2): -1}) ** 2
    expr = RationalExpression(num * pair_num, den * pair_den.times_monomial((2 * k, 0, 0)))
    return _residue_sum(curve, expr, 0).drop_var(0)


def unstable_split_series(curve: CurveSpec, k: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """Single-point unstable residues by series expansion (harmonic curve)."""
    curve.require_harmonic()
    num, den = _kernel_num_den(curve, 3)
    pair_num = LaurentPolynomial(3, {(2, 0, 0): -2, (0, 0, 2): -2})
    pair_den = LaurentPolynomial(3, {(2, 0, 0): 1, (0, 0, 2): -1}) ** 2
    expr = RationalExpression(num * pair_num, den * pair_den.times_monomial((2 * k, 0, 0)))
    return (
        residue_at_zero(expr, 0).drop_var(0),
        residue_at_infinity(expr, 0).drop_var(0),
    )


# ---------------------------------------------------------------------------
# Assembly of the recursion.
# ---------------------------------------------------------------------------

def _apply_basic(curve: CurveSpec, integrand: LaurentPolynomial,
                 backend: str) -> LaurentPolynomial:
    """Monomial-wise residue of K against a z-even integrand (z in slot 0)."""
    n = integrand.arity
    total = LaurentPolynomial.zero(n)
    for e, part in integrand.by_var_exponent(0).items():
        if e % 2:
            raise InvariantViolation("odd power of the residue variable in the integrand")
        r = residue_basic(curve, -e // 2, backend).lift(n, (0,))
        total = total + r * part
    return total


def _apply_unstable(curve: CurveSpec, integrand: LaurentPolynomial, j_pos: int,
                    backend: str) -> LaurentPolynomial:
    n = integrand.arity
    total = LaurentPolynomial.zero(n)
    for e, part in integrand.by_var_exponent(0).items():
        if e % 2:
            raise InvariantViolation("odd power of the residue variable in the integrand")
        r = residue_unstable(curve, -e // 2, backend).lift(n, (0, j_pos))
        total = total + r * part
    return total


def _first_generation(curve: CurveSpec, g: int, n: int, backend: str) -> LaurentPolynomial:
    """w_{1,1} and w_{0,3}: the only cases with bare Bergman factors."""
    if (g, n) == (1, 1):
        # w_{0,2}(z, -z) = -(dz)**2 / (4 z**2); the sign is the usual
        # involuted-leg minus, so the even integrand to subtract is z**-2/4.
        integrand = LaurentPolynomial.monomial(1, (-2,), Fraction(-1, 4))
        return _apply_basic(curve, integrand, backend)
    # (0, 3): K(z, z1) against w02(z, z2) w02(-z, z3) + w02(z, z3) w02(-z, z2),
    # with d(-z) = -dz giving the overall minus.  Work in (z, z1, z2, z3).
    knum, kden = _kernel_num_den(curve, 4)

    def sq(sign: int, which: int) -> LaurentPolynomial:
        e = [0, 0, 0, 0]
        e[which] = 1
        linear = LaurentPolynomial(4, {(1, 0, 0, 0): 1, tuple(e): sign})
        return linear * linear

    den_a = sq(-1, 2) * sq(1, 3)        # (z - z2)**2 (z + z3)**2
    den_b = sq(-1, 3) * sq(1, 2)        # (z - z3)**2 (z + z2)**2
    pair_num = -(den_b + den_a)         # -(1/den_a + 1/den_b) over den_a*den_b
    pair_den = den_a * den_b
    expr = RationalExpression(knum * pair_num, kden * pair_den)
    return _residue_sum(curve, expr, 0).drop_var(0)


def _splittings(g: int, spectators: tuple[int, ...]):
    """Ordered stable splittings (g1, I), (g2, J) of (g, spectators)."""
    for size in range(len(spectators) + 1):
        for subset in combinations(spectators, size):
            rest = tuple(p for p in spectators if p not in subset)
            for g1 in range(g + 1):
                g2 = g - g1
                if is_stable(g1, len(subset) + 1) and is_stable(g2, len(rest) + 1):
                    yield g1, subset, g2, rest


def compute_w(curve: CurveSpec, g: int, n: int, store: MemoStore | None = None,
              backend: str = BACKEND_CLOSED) -> MultiDifferential:
    """The stable differential w_{g, n}, validated and memoized."""
    _require_stable(g, n)
    if backend not in _BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if store is None:
        store = MemoStore()
    cached = store.get(curve, g, n)
    if cached is not None:
        return MultiDifferential(g, n, curve, cached)

    if 2 * g - 2 + n == 1:
        poly = _first_generation(curve, g, n, backend)
    else:
        poly = _assemble(curve, g, n, store, backend)

    _validate(curve, g, n, poly)
    store.put(curve, g, n, poly)
    return MultiDifferential(g, n, curve, poly)


def _assemble(curve: CurveSpec, g: int, n: int, store: MemoStore,
              backend: str) -> LaurentPolynomial:
    spectators = tuple(range(1, n))

    # (a) self pairing: P_{g-1, n+1}(z, z, z2...), slot 1 folded into slot 0.
    integrand = LaurentPolynomial.zero(n)
    if g >= 1:
        child = compute_w(curve, g - 1, n + 1, store, backend).poly
        integrand = integrand + child.identify(1, 0)

    # (b) ordered stable splittings.
    for g1, subset, g2, rest in _splittings(g, spectators):
        left = compute_w(curve, g1, len(subset) + 1, store, backend).poly
        right = compute_w(curve, g2, len(rest) + 1, store, backend).poly
        integrand = integrand + left.lift(n, (0,) + subset) * right.lift(n, (0,) + rest)

    total = _apply_basic(curve, -integrand, backend)

    # (c) Bergman involution difference against P_{g, n-1}.
    if spectators:
        child = compute_w(curve, g, n - 1, store, backend).poly
        for j in spectators:
            rest = tuple(p for p in spectators if p != j)
            total = total + _apply_unstable(curve, child.lift(n, (0,) + rest), j, backend)
    return total


def _validate(curve: CurveSpec, g: int, n: int, poly: LaurentPolynomial) -> None:
    """The structural invariants every stable differential must satisfy."""
    if not poly.is_symmetric():
        raise InvariantViolation(f"w_({g},{n}) is not permutation symmetric")
    if not poly.has_only_even_exponents():
        raise InvariantViolation(f"w_({g},{n}) has an odd exponent")
    if curve.is_harmonic:
        sign = Fraction(-1) ** n
        for exp, coef in poly.terms.items():
            mirror = tuple(-2 - e for e in exp)
            if poly.coefficient(mirror) != sign * coef:
                raise InvariantViolation(
                    f"w_({g},{n}) pairing failed at exponent {exp}"
                )
    else:
        for exp in poly.terms:
            if any(e > -2 for e in exp):
                raise InvariantViolation(f"w_({g},{n}) on the Airy curve has exponent {exp}")


def leading_airy_factor(curve: CurveSpec, g: int, n: int) -> Fraction:
    """Expected ratio of leading pole coefficients, harmonic over Airy."""
    curve.require_harmonic()
    return (Fraction(-curve.eps, 4) / curve.c2) ** (2 * g - 2 + n)


def check_leading_airy(w_h: MultiDifferential, w_a: MultiDifferential) -> None:
    """Leading poles of the harmonic differential match the Airy one."""
    factor = leading_airy_factor(w_h.curve, w_h.g, w_h.n)
    weight = 3 * w_h.g - 3 + w_h.n
    for exp in w_a.poly.terms:
        if sum((-e - 2) // 2 for e in exp) != weight:
            raise InvariantViolation("Airy differential outside its pole set")
    lead_h = {
        exp: coef
        for exp, coef in w_h.poly.terms.items()
        if all(e <= -2 for e in exp) and sum((-e - 2) // 2 for e in exp) == weight
    }
    lead_a = {exp: factor * coef for exp, coef in w_a.poly.terms.items()}
    if not lead_a or lead_h != lead_a:
        raise InvariantViolation(
            f"leading poles of w_({w_h.g},{w_h.n}) do not match the Airy ones"
        )


# ---------------------------------------------------------------------------
# The halved antiderivative of the unstable action (enters the free-energy
# recursion; kept here because it shares the bracket structure above).
# ---------------------------------------------------------------------------

def unstable_residue_primitive(k: int) -> LaurentPolynomial:
    """Half the zj-antiderivative of the unstable bracket acting on s**(-2k).

    A polynomial in (z1, zj); only the eps/c**2-free bracket, matching the
    normalization in which the unstable residue is (-eps/8c**2) times the
    bracket.
    """
    cube = _one_minus_sq_cubed(2, 0)
    total = LaurentPolynomial.zero(2)
    for r in range(0, 1 - k + 1):
        total = total + cube.times_monomial((2 * (1 - k - r) - 6, 2 * r + 1))
    for t in range(0, k - 3 + 1):
        total = total - cube.times_monomial((-2 * (k - t) - 2, -2 * t - 1))
    quad = LaurentPolynomial(2, {(4, 0): 3, (2, 0): -3, (0, 0): 1})
    lin = LaurentPolynomial(2, {(2, 0): -3, (0, 0): 1})
    total = total - quad.times_monomial((-6, -2 * (k - 2) - 1))
    total = total - lin.times_monomial((-4, -2 * (k - 1) - 1))
    total = total - LaurentPolynomial.monomial(2, (-2, -2 * k - 1))
    return total
