"""Intersection numbers and Poincare polynomials of metric ribbon graph spaces.

Two independent extraction routes for the psi-class intersection numbers:

* Airy route: the stable Airy differentials have the pure-pole form
  (1/2**(2g-2+n)) sum <tau_a> prod (2a_i+1)!! / y_i**(2a_i+2), so inverting
  the double-factorial weights on each pole coefficient reads the table off.
* Harmonic route: the same numbers sit in the leading poles of the harmonic
  differentials with prefactor (-eps/8c**2)**(2g-2+n).  Any disagreement
  between the routes is fatal.

Two independent pipelines for the Poincare polynomial of the (g, n) ribbon
graph orbifold:

* integration: P_{g,n} = (-c**2/2 eps)**(2g-2+n) int_{-1}^{z_i} w_{g,n},
  term-wise z**(2a) -> (z**(2a+1)+1)/(2a+1) in every variable;
* a stand-alone integrated recursion seeded with the (1,1) and (0,3)
  polynomials, never touching the residue engine.  Its removable-singularity
  bracket is divided out exactly; a remainder is fatal.

The recursion's derivative reads, with u the integration variable replacing
z1 and primes denoting that slot,

    dP_{g,n}/du = (1/32)(1-u**2)**3/u**2 [ d_s d_t P_{g-1,n+1}|_{s=t=u}
                  + sum_stable dP_{g1} dP_{g2} ]
                  + sum_j { -(1/16)(1-u**2)**2/u**2 dP_{g,n-1}(u, rest_j)
                  + (1/16) zj/(u**2-zj**2) [ (1-u**2)**3/u**2 dP(u, rest_j)
                                  - (1-zj**2)**3/zj**2 dP(zj, rest minus z1) ] }

followed by integration from -1.  The sign of the (1-u**2)**2 term is the
boundary value of the odd antiderivative of the unstable bracket; the tests
pin it against the integration pipeline and against direct symbolic
integration of that bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import AIRY, CurveSpec
from .errors import IncompleteError, LogTermError, MismatchError
from .laurent import LaurentPolynomial, exact_div
from .memo import MemoStore
from .recursion import BACKEND_CLOSED, compute_w, is_stable


@dataclass(frozen=True)
class TauTable:
    """Intersection numbers <tau_{a1} ... tau_{an}>_g, keyed by sorted tuples."""

    g: int
    n: int
    entries: dict[tuple[int, ...], Fraction]

    def value(self, *a: int) -> Fraction:
        return self.entries[tuple(sorted(a))]

    def to_json_dict(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "entries": [
                {"a": list(a), "value": str(v)}
                for a, v in sorted(self.entries.items())
            ],
        }


@dataclass(frozen=True)
class PoincarePolynomial:
    g: int
    n: int
    poly: LaurentPolynomial


def double_factorial_odd(a: int) -> int:
    """(2a+1)!! = 1 * 3 * ... * (2a+1)."""
    out = 1
    for i in range(a + 1):
        out *= 2 * i + 1
    return out


def tau_from_airy(g: int, n: int, store: MemoStore | None = None,
                  backend: str = BACKEND_CLOSED) -> TauTable:
    """Read the intersection table off the Airy pole coefficients."""
    w = compute_w(CurveSpec.airy(), g, n, store, backend)
    weight = 3 * g - 3 + n
    scale = Fraction(2) ** (2 * g - 2 + n)
    entries: dict[tuple[int, ...], Fraction] = {}
    for exp, coef in w.poly.terms.items():
        if any(e > -2 or e % 2 for e in exp):
            raise IncompleteError(f"unexpected Airy exponent vector {exp}")
        a = tuple((-e - 2) // 2 for e in exp)
        if sum(a) != weight:
            raise IncompleteError(f"Airy pole {exp} off the weight-{weight} set")
        value = coef * scale
        for ai in a:
            value /= double_factorial_odd(ai)
        key = tuple(sorted(a))
        if entries.setdefault(key, value) != value:
            raise MismatchError(f"asymmetric intersection value at {key}")
    return TauTable(g, n, entries)


def tau_from_harmonic(curve: CurveSpec, g: int, n: int,
                      store: MemoStore | None = None,
                      airy_store: MemoStore | None = None,
                      backend: str = BACKEND_CLOSED) -> TauTable:
    """Extract the table from the harmonic leading poles; cross-checked
    against the Airy route, and MismatchError on any difference."""
    curve.require_harmonic()
    w = compute_w(curve, g, n, store, backend)
    weight = 3 * g - 3 + n
    scale = (Fraction(-curve.eps, 8) / curve.c2) ** (2 * g - 2 + n)
    entries: dict[tuple[int, ...], Fraction] = {}
    for exp, coef in w.poly.terms.items():
        if any(e > -2 for e in exp):
            continue
        a = tuple((-e - 2) // 2 for e in exp)
        if sum(a) != weight:
            continue
        value = coef / scale
        for ai in a:
            value /= double_factorial_odd(ai)
        key = tuple(sorted(a))
        if entries.setdefault(key, value) != value:
            raise MismatchError(f"asymmetric intersection value at {key}")
    reference = tau_from_airy(g, n, airy_store, backend)
    if entries != reference.entries:
        raise MismatchError(
            f"intersection tables disagree between curves at (g, n) = ({g}, {n})"
        )
    return TauTable(g, n, entries)


# ---------------------------------------------------------------------------
# Poincare polynomials.
# ---------------------------------------------------------------------------

def integrate_from_minus_one(p: LaurentPolynomial, var: int) -> LaurentPolynomial:
    """Term-wise int_{-1}^{z} in one variable: z**e -> (z**(e+1)-(-1)**(e+1))/(e+1)."""
    out = LaurentPolynomial.zero(p.arity)
    for exp, c in p.terms.items():
        e = exp[var]
        if e == -1:
            raise LogTermError(f"exponent -1 in variable {var}")
        up = list(exp)
        up[var] = e + 1
        boundary = list(exp)
        boundary[var] = 0
        sign_at_minus_one = 1 if (e + 1) % 2 == 0 else -1
        out = out + LaurentPolynomial(
            p.arity,
            {
                tuple(up): Fraction(c, e + 1),
                tuple(boundary): -Fraction(c) * sign_at_minus_one / (e + 1),
            },
        )
    return out


def poincare_from_harmonic(curve: CurveSpec, g: int, n: int,
                           store: MemoStore | None = None,
                           backend: str = BACKEND_CLOSED) -> PoincarePolynomial:
    """Integrate the harmonic differential from -1 in every variable and
    apply the prefactor (-c**2/2 eps)**(2g-2+n) (equal to 1 at the defaults)."""
    curve.require_harmonic()
    w = compute_w(curve, g, n, store, backend)
    poly = w.poly
    for var in range(n):
        poly = integrate_from_minus_one(poly, var)
    pref = (Fraction(-1, 2) * curve.c2 / curve.eps) ** (2 * g - 2 + n)
    return PoincarePolynomial(g, n, poly.scale(pref))


def _initial_poincare_11() -> LaurentPolynomial:
    # -(1+z)**4 (z - 4 + 1/z) / (384 z**2)
    quartic = LaurentPolynomial(1, {(1,): 1, (0,): 1}) ** 4
    bracket = LaurentPolynomial(1, {(1,): 1, (0,): -4, (-1,): 1})
    return (quartic * bracket).times_monomial((-2,), Fraction(-1, 384))


def _initial_poincare_03() -> LaurentPolynomial:
    # -(1+z1)(1+z2)(1+z3)(1 + 1/(z1 z2 z3)) / 16
    out = LaurentPolynomial.constant(3, Fraction(-1, 16))
    for i in range(3):
        out = out * LaurentPolynomial(3, {
            tuple(1 if j == i else 0 for j in range(3)): 1,
            (0, 0, 0): 1,
        })
    return out * LaurentPolynomial(3, {(0, 0, 0): 1, (-1, -1, -1): 1})


_poincare_cache: dict[tuple[int, int], LaurentPolynomial] = {}


def poincare_by_recursion(g: int, n: int) -> PoincarePolynomial:
    """The stand-alone integrated recursion, fully independent of the
    residue engine (shares only the polynomial algebra)."""
    if not is_stable(g, n):
        raise IncompleteError(f"(g, n) = ({g}, {n}) is not stable")
    return PoincarePolynomial(g, n, _poincare_poly(g, n))


def _poincare_poly(g: int, n: int) -> LaurentPolynomial:
    key = (g, n)
    cached = _poincare_cache.get(key)
    if cached is not None:
        return cached
    if key == (1, 1):
        poly = _initial_poincare_11()
    elif key == (0, 3):
        poly = _initial_poincare_03()
    else:
        poly = integrate_from_minus_one(_poincare_derivative(g, n), 0)
    _poincare_cache[key] = poly
    return poly


def _poincare_derivative(g: int, n: int) -> LaurentPolynomial:
    """d/dz1 of the (g, n) polynomial, for 2g - 2 + n >= 2."""
    spectators = tuple(range(1, n))
    zero = LaurentPolynomial.zero(n)
    usq = LaurentPolynomial(n, {_unit(n, 0, 2): 1})
    one_minus_u2 = LaurentPolynomial.constant(n, 1) - usq
    factor_a = (one_minus_u2 ** 3).times_monomial(_unit(n, 0, -2), Fraction(1, 32))

    total = zero
    if g >= 1:
        child = _poincare_poly(g - 1, n + 1)
        total = total + factor_a * child.diff(0).diff(1).identify(1, 0)

    for g1 in range(g + 1):
        for subset in _subsets(spectators):
            rest = tuple(p for p in spectators if p not in subset)
            g2 = g - g1
            if not (is_stable(g1, len(subset) + 1) and is_stable(g2, len(rest) + 1)):
                continue
            left = _poincare_poly(g1, len(subset) + 1).diff(0).lift(n, (0,) + subset)
            right = _poincare_poly(g2, len(rest) + 1).diff(0).lift(n, (0,) + rest)
            total = total + factor_a * (left * right)

    if spectators:
        child = _poincare_poly(g, n - 1)
        dchild = child.diff(0)
        sq_term = (one_minus_u2 * one_minus_u2).times_monomial(
            _unit(n, 0, -2), Fraction(-1, 16)
        )
        for j in spectators:
            rest = tuple(p for p in spectators if p != j)
            at_u = dchild.lift(n, (0,) + rest)
            total = total + sq_term * at_u
            # bracket with the removable singularity at u**2 = zj**2
            zjsq = LaurentPolynomial(n, {_unit(n, j, 2): 1})
            cube_u = (one_minus_u2 ** 3).times_monomial(_unit(n, 0, -2))
            cube_j = ((LaurentPolynomial.constant(n, 1) - zjsq) ** 3
                      ).times_monomial(_unit(n, j, -2))
            at_j = dchild.lift(n, (j,) + rest)
            bracket = cube_u * at_u - cube_j * at_j
            ratio = exact_div(bracket, usq - zjsq, 0)
            total = total + ratio.times_monomial(_unit(n, j, 1), Fraction(1, 16))
    return total


def _unit(arity: int, var: int, k: int) -> tuple[int, ...]:
    e = [0] * arity
    e[var] = k
    return tuple(e)


def _subsets(items: tuple[int, ...]):
    from itertools import combinations

    for size in range(len(items) + 1):
        yield from combinations(items, size)


def check_poincare_differential(curve: CurveSpec, g: int, n: int,
                                store: MemoStore | None = None,
                                backend: str = BACKEND_CLOSED) -> bool:
    """d_{z1} ... d_{zn} P_{g,n} recovers the differential (with prefactor)."""
    p = poincare_from_harmonic(curve, g, n, store, backend)
    d = p.poly
    for var in range(n):
        d = d.diff(var)
    w = compute_w(curve, g, n, store, backend)
    pref = (Fraction(-1, 2) * curve.c2 / curve.eps) ** (2 * g - 2 + n)
    return d == w.poly.scale(pref)
