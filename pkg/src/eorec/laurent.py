"""Sparse multivariate Laurent polynomials over exact rationals.

A polynomial with ``arity`` variables is a mapping from integer exponent
vectors (length ``arity``, negative entries allowed) to nonzero ``Fraction``
coefficients::

    z1**2 * z2**-4  ->  {(2, -4): Fraction(1)}

The zero polynomial is the empty mapping.  All arithmetic is exact; no
floating point enters anywhere.  Values are immutable after construction and
may be shared freely across threads.

Serialization walks terms in graded lexicographic order (total degree first,
then the exponent tuple), so every emission is byte-reproducible.  The JSON
shape is shared by the whole package::

    {"arity": n, "terms": [{"exp": [k1, ..., kn], "coef": "p/q"}]}

with coefficients as exact ``p/q`` strings (``/q`` omitted when q == 1).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import ArityError, LogTermError, RemainderError

Exponent = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with Fraction coefficients."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[Exponent, object] | None = None):
        if arity < 0:
            raise ValueError("arity must be >= 0")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coef in terms.items():
                exp = tuple(exp)
                if len(exp) != arity:
                    raise ArityError(f"exponent {exp} does not have {arity} entries")
                c = _as_fraction(coef)
                if c != 0:
                    prev = clean.get(exp)
                    c = c if prev is None else prev + c
                    if c != 0:
                        clean[exp] = c
                    elif prev is not None:
                        del clean[exp]
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, arity: int, terms: dict[Exponent, Fraction]) -> "LaurentPolynomial":
        # Internal fast path: caller guarantees canonical terms.
        self = object.__new__(cls)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", terms)
        return self

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "LaurentPolynomial":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, arity: int, value) -> "LaurentPolynomial":
        c = _as_fraction(value)
        if c == 0:
            return cls.zero(arity)
        return cls._raw(arity, {(0,) * arity: c})

    @classmethod
    def monomial(cls, arity: int, exp: Iterable[int], coef=1) -> "LaurentPolynomial":
        c = _as_fraction(coef)
        exp = tuple(exp)
        if len(exp) != arity:
            raise ArityError(f"exponent {exp} does not have {arity} entries")
        if c == 0:
            return cls.zero(arity)
        return cls._raw(arity, {exp: c})

    @classmethod
    def variable(cls, arity: int, index: int, power: int = 1) -> "LaurentPolynomial":
        exp = [0] * arity
        exp[index] = power
        return cls.monomial(arity, exp)

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exp), _ZERO)

    def constant_value(self) -> Fraction:
        """The coefficient of the constant monomial."""
        return self.terms.get((0,) * self.arity, _ZERO)

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def min_exponent(self, var: int) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no exponent range")
        return min(exp[var] for exp in self.terms)

    def max_exponent(self, var: int) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no exponent range")
        return max(exp[var] for exp in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check_arity(self, other: "LaurentPolynomial") -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.arity, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check_arity(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, _ZERO) + c
            if s:
                out[exp] = s
            elif exp in out:
                del out[exp]
        return LaurentPolynomial._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.arity, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check_arity(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(exp, _ZERO) + ca * cb
                if s:
                    out[exp] = s
                elif exp in out:
                    del out[exp]
        return LaurentPolynomial._raw(self.arity, out)

    __rmul__ = __mul__

    def scale(self, value) -> "LaurentPolynomial":
        c = _as_fraction(value)
        if c == 0:
            return LaurentPolynomial.zero(self.arity)
        return LaurentPolynomial._raw(self.arity, {e: c * v for e, v in self.terms.items()})

    def times_monomial(self, exp: Iterable[int], coef=1) -> "LaurentPolynomial":
        """Multiply by a single monomial (exact, never enlarges the term count)."""
        c = _as_fraction(coef)
        d = tuple(exp)
        if len(d) != self.arity:
            raise ArityError("monomial exponent has wrong length")
        if c == 0:
            return LaurentPolynomial.zero(self.arity)
        return LaurentPolynomial._raw(
            self.arity,
            {tuple(x + y for x, y in zip(e, d)): c * v for e, v in self.terms.items()},
        )

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = LaurentPolynomial.constant(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus ------------------------------------------------------------

    def diff(self, var: int) -> "LaurentPolynomial":
        """Term-wise derivative: z**k -> k * z**(k-1)."""
        if var >= self.arity:
            raise ArityError(f"no variable {var} in arity {self.arity}")
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            k = exp[var]
            if k == 0:
                continue
            e = list(exp)
            e[var] = k - 1
            e = tuple(e)
            s = out.get(e, _ZERO) + c * k
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPolynomial._raw(self.arity, out)

    def antiderivative(self, var: int) -> "LaurentPolynomial":
        """Term-wise antiderivative with zero constant: z**k -> z**(k+1)/(k+1).

        Raises LogTermError on an exponent -1 term, which would require a
        logarithm and signals an input outside the even-exponent class.
        """
        if var >= self.arity:
            raise ArityError(f"no variable {var} in arity {self.arity}")
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            k = exp[var]
            if k == -1:
                raise LogTermError(f"term with exponent -1 in variable {var}")
            e = list(exp)
            e[var] = k + 1
            out[tuple(e)] = c / (k + 1)
        return LaurentPolynomial._raw(self.arity, out)

    # -- variable plumbing -----------------------------------------------------

    def specialize(self) -> "LaurentPolynomial":
        """Set all variables equal to a single one (principal specialization)."""
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            e = (sum(exp),)
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPolynomial._raw(1, out)

    def identify(self, src: int, dst: int) -> "LaurentPolynomial":
        """Set variable ``src`` equal to variable ``dst`` and drop the slot."""
        if src == dst:
            raise ValueError("src and dst must differ")
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            e = list(exp)
            e[dst] += e[src]
            del e[src]
            e = tuple(e)
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPolynomial._raw(self.arity - 1, out)

    def lift(self, arity: int, positions: Iterable[int]) -> "LaurentPolynomial":
        """Embed into a larger variable set, variable i going to positions[i]."""
        pos = tuple(positions)
        if len(pos) != self.arity:
            raise ArityError("positions must list one slot per variable")
        if len(set(pos)) != len(pos) or any(p < 0 or p >= arity for p in pos):
            raise ValueError(f"invalid positions {pos} for arity {arity}")
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            e = [0] * arity
            for k, p in zip(exp, pos):
                e[p] = k
            out[tuple(e)] = c
        return LaurentPolynomial._raw(arity, out)

    def drop_var(self, var: int) -> "LaurentPolynomial":
        """Remove an unused variable slot."""
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            if exp[var] != 0:
                raise ValueError(f"variable {var} is in use")
            out[exp[:var] + exp[var + 1:]] = c
        return LaurentPolynomial._raw(self.arity - 1, out)

    def permute(self, perm: Iterable[int]) -> "LaurentPolynomial":
        """Relabel variables: new slot i carries the exponent of old slot perm[i]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.arity)):
            raise ValueError(f"not a permutation of 0..{self.arity - 1}: {perm}")
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            out[tuple(exp[p] for p in perm)] = c
        return LaurentPolynomial._raw(self.arity, out)

    def negate_var(self, var: int) -> "LaurentPolynomial":
        """Substitute z -> 1/z in one variable (exponent sign flip)."""
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            e = list(exp)
            e[var] = -e[var]
            out[tuple(e)] = c
        return LaurentPolynomial._raw(self.arity, out)

    def by_var_exponent(self, var: int) -> dict[int, "LaurentPolynomial"]:
        """Group terms by their exponent in ``var`` (slot zeroed in each part)."""
        groups: dict[int, dict[Exponent, Fraction]] = {}
        for exp, c in self.terms.items():
            k = exp[var]
            e = list(exp)
            e[var] = 0
            groups.setdefault(k, {})[tuple(e)] = c
        return {k: LaurentPolynomial._raw(self.arity, d) for k, d in groups.items()}

    def evaluate(self, values: Iterable[object]) -> Fraction:
        vals = [_as_fraction(v) for v in values]
        if len(vals) != self.arity:
            raise ArityError("wrong number of values")
        total = _ZERO
        for exp, c in self.terms.items():
            term = c
            for v, k in zip(vals, exp):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute_value(self, var: int, value) -> "LaurentPolynomial":
        """Evaluate one variable at a rational and drop its slot."""
        v = _as_fraction(value)
        out: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            e = exp[:var] + exp[var + 1:]
            s = out.get(e, _ZERO) + c * v ** exp[var]
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPolynomial._raw(self.arity - 1, out)

    # -- structure tests -------------------------------------------------------

    def is_symmetric(self) -> bool:
        """Invariance under all variable permutations (checked on transpositions)."""
        for i in range(self.arity - 1):
            perm = list(range(self.arity))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            if self.permute(perm).terms != self.terms:
                return False
        return True

    def has_only_even_exponents(self) -> bool:
        return all(all(e % 2 == 0 for e in exp) for exp in self.terms)

    def has_only_odd_exponents(self) -> bool:
        return all(all(e % 2 == 1 for e in exp) for exp in self.terms)

    # -- serialization -----------------------------------------------------------

    def sorted_terms(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in canonical graded-lex order (total degree, then tuple)."""
        for exp in sorted(self.terms, key=lambda e: (sum(e), e)):
            yield exp, self.terms[exp]

    def to_json_dict(self) -> dict:
        return {
            "arity": self.arity,
            "terms": [
                {"exp": list(exp), "coef": str(coef)}
                for exp, coef in self.sorted_terms()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "LaurentPolynomial":
        return cls(int(data["arity"]), {tuple(t["exp"]): Fraction(t["coef"]) for t in data["terms"]})

    @classmethod
    def loads(cls, text: str) -> "LaurentPolynomial":
        return cls.from_json_dict(json.loads(text))

    def to_plain(self, names: list[str] | None = None) -> str:
        """Human-readable rendering in canonical term order."""
        if self.is_zero:
            return "0"
        names = names or [f"z{i + 1}" for i in range(self.arity)]
        parts = []
        for exp, coef in self.sorted_terms():
            factors = [str(coef)]
            for name, k in zip(names, exp):
                if k:
                    factors.append(f"{name}^{k}" if k != 1 else name)
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_latex(self, names: list[str] | None = None) -> str:
        if self.is_zero:
            return "0"
        names = names or [f"z_{{{i + 1}}}" for i in range(self.arity)]
        parts = []
        for exp, coef in self.sorted_terms():
            if coef.denominator == 1:
                num = str(abs(coef.numerator))
            else:
                num = rf"\frac{{{abs(coef.numerator)}}}{{{coef.denominator}}}"
            mono = "".join(
                (name if k == 1 else f"{name}^{{{k}}}") for name, k in zip(names, exp) if k
            )
            sign = "-" if coef < 0 else ("+" if parts else "")
            if mono and abs(coef) == 1:
                num = ""
            parts.append(f"{sign} {num}{mono}".strip())
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPolynomial({self.arity}, {self.to_plain()})"


def exact_div(p: LaurentPolynomial, d: LaurentPolynomial, var: int) -> LaurentPolynomial:
    """Exact division by a polynomial in ``var``, Laurent in the rest.

    The divisor's leading coefficient in ``var`` must be a single monomial
    (all our divisors are monic).  Raises RemainderError unless p = q * d
    exactly; the quotient is never truncated.
    """
    if p.arity != d.arity:
        raise ArityError("arity mismatch in division")
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return p
    if len(d.terms) == 1:
        ((exp, c),) = d.terms.items()
        return p.times_monomial(tuple(-e for e in exp), 1 / c)

    # Shift both operands so their lowest var-exponent sits at zero; an exact
    # Laurent quotient then becomes an ordinary polynomial quotient.
    shift_p = -p.min_exponent(var)
    shift_d = -d.min_exponent(var)
    sp = [0] * p.arity
    sp[var] = shift_p
    sd = [0] * d.arity
    sd[var] = shift_d
    pw = p.times_monomial(tuple(sp)) if shift_p else p
    dw = d.times_monomial(tuple(sd)) if shift_d else d

    dtop = dw.max_exponent(var)
    lead = {e: c for e, c in dw.terms.items() if e[var] == dtop}
    if len(lead) != 1:
        raise RemainderError("divisor leading coefficient is not a monomial")
    ((lexp, lcoef),) = lead.items()
    linv_exp = tuple(-e for e in lexp)
    linv_coef = 1 / lcoef

    rem = dict(pw.terms)
    quo: dict[Exponent, Fraction] = {}
    while rem:
        rtop = max(e[var] for e in rem)
        if rtop < dtop:
            raise RemainderError("division is not exact")
        layer = [(e, c) for e, c in rem.items() if e[var] == rtop]
        for e, c in layer:
            qe = tuple(x + y for x, y in zip(e, linv_exp))
            qc = c * linv_coef
            quo[qe] = quo.get(qe, _ZERO) + qc
            for de, dc in dw.terms.items():
                re = tuple(x + y for x, y in zip(qe, de))
                s = rem.get(re, _ZERO) - qc * dc
                if s:
                    rem[re] = s
                elif re in rem:
                    del rem[re]
    unshift = [0] * p.arity
    unshift[var] = shift_d - shift_p
    q = LaurentPolynomial._raw(p.arity, {e: c for e, c in quo.items() if c})
    return q.times_monomial(tuple(unshift)) if unshift[var] else q


class RationalExpression:
    """A quotient of Laurent polynomials, never reduced to lowest terms.

    Correctness of every consumer (expansion, residues, substitution) is
    independent of normal forms, so no GCD machinery exists on purpose.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial | None = None):
        if den is None:
            den = LaurentPolynomial.constant(num.arity, 1)
        if num.arity != den.arity:
            raise ArityError("numerator and denominator arity differ")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("RationalExpression is immutable")

    @property
    def arity(self) -> int:
        return self.num.arity

    def __mul__(self, other):
        if isinstance(other, RationalExpression):
            return RationalExpression(self.num * other.num, self.den * other.den)
        if isinstance(other, LaurentPolynomial):
            return RationalExpression(self.num * other, self.den)
        if isinstance(other, (int, Fraction)):
            return RationalExpression(self.num.scale(other), self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, LaurentPolynomial):
            other = RationalExpression(other)
        if not isinstance(other, RationalExpression):
            return NotImplemented
        return RationalExpression(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        if isinstance(other, LaurentPolynomial):
            other = RationalExpression(other)
        if not isinstance(other, RationalExpression):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return RationalExpression(-self.num, self.den)

    def equivalent(self, other: "RationalExpression") -> bool:
        """Equality as rational functions, by cross multiplication."""
        return self.num * other.den == other.num * self.den

    def negate_var(self, var: int) -> "RationalExpression":
        return RationalExpression(self.num.negate_var(var), self.den.negate_var(var))

    def evaluate(self, values: Iterable[object]) -> Fraction:
        vals = list(values)
        d = self.den.evaluate(vals)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(vals) / d

    def to_laurent(self, var: int) -> LaurentPolynomial:
        """Exact conversion to a Laurent polynomial (the quotient must be one)."""
        return exact_div(self.num, self.den, var)

    def __repr__(self):
        return f"RationalExpression(({self.num.to_plain()}) / ({self.den.to_plain()}))"
