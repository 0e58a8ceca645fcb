"""Core Laurent-polynomial algebra."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from eorec.errors import ArityError, LogTermError, RemainderError
from eorec.laurent import LaurentPolynomial, RationalExpression, exact_div
from util import P


class TestArithmetic:
    def test_binomial_square(self):
        p = P(1, {(2,): 1, (0,): -1})
        assert p * p == P(1, {(4,): 1, (2,): -2, (0,): 1})

    def test_additive_identity(self):
        p = P(2, {(1, -3): Fraction(2, 7), (0, 0): -1})
        assert p + LaurentPolynomial.zero(2) == p

    def test_difference_of_squares(self):
        plus = P(1, {(1,): 1, (-1,): 1})
        minus = P(1, {(1,): 1, (-1,): -1})
        assert plus * minus == P(1, {(2,): 1, (-2,): -1})

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            P(1, {(1,): 1}) + P(2, {(1, 0): 1})
        with pytest.raises(ArityError):
            P(1, {(1,): 1}) * P(2, {(1, 0): 1})

    def test_scale_and_neg(self):
        p = P(1, {(3,): 4, (-1,): -2})
        assert p.scale(Fraction(1, 2)) == P(1, {(3,): 2, (-1,): -1})
        assert -p == p.scale(-1)

    def test_zero_coefficients_never_stored(self):
        p = P(1, {(1,): 1}) - P(1, {(1,): 1})
        assert p.is_zero and p.terms == {}

    def test_pow(self):
        p = P(1, {(1,): 1, (0,): 1})
        assert p ** 3 == P(1, {(3,): 1, (2,): 3, (1,): 3, (0,): 1})
        assert p ** 0 == LaurentPolynomial.constant(1, 1)


class TestCalculus:
    def test_power_rule(self):
        p = P(1, {(2,): 1, (-4,): -1})
        assert p.diff(0) == P(1, {(1,): 2, (-5,): 4})

    def test_derivative_of_constant(self):
        assert LaurentPolynomial.constant(1, 7).diff(0).is_zero

    def test_multivariate_derivative(self):
        # d/dz2 of z1 z2 z3 + 1/(z1 z2 z3)
        p = P(3, {(1, 1, 1): 1, (-1, -1, -1): 1})
        assert p.diff(1) == P(3, {(1, 0, 1): 1, (-1, -2, -1): -1})

    def test_antiderivative_inverts_derivative(self):
        p = P(1, {(1,): 2, (-5,): 4})
        assert p.antiderivative(0) == P(1, {(2,): 1, (-4,): -1})

    def test_antiderivative_log_term(self):
        with pytest.raises(LogTermError):
            P(1, {(-1,): 1}).antiderivative(0)

    def test_antiderivative_of_zero(self):
        assert LaurentPolynomial.zero(1).antiderivative(0).is_zero

    def test_round_trips(self):
        rng = random.Random(7)
        for _ in range(25):
            exps = {(rng.randint(-6, 6),): Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                    for _ in range(5)}
            integrable = LaurentPolynomial(
                1, {e: c for e, c in exps.items() if e[0] != -1}
            )
            assert integrable.antiderivative(0).diff(0) == integrable
            no_const = LaurentPolynomial(
                1, {e: c for e, c in integrable.terms.items() if e[0] != 0}
            )
            assert no_const.diff(0).antiderivative(0) == no_const


class TestSubstitution:
    def test_specialize(self):
        p = P(3, {(1, 1, 1): 1, (-1, -1, -1): 1})
        assert p.specialize() == P(1, {(3,): 1, (-3,): 1})

    def test_specialize_order_independent(self):
        p = P(2, {(2, 0): 1, (0, 2): 1, (1, 1): -3})
        assert p.specialize() == p.permute((1, 0)).specialize()

    def test_identify_and_lift(self):
        p = P(3, {(1, 2, 3): 1})
        assert p.identify(1, 0) == P(2, {(3, 3): 1})
        q = P(2, {(1, 2): 5})
        assert q.lift(4, (2, 0)) == P(4, {(2, 0, 1, 0): 5})

    def test_evaluate(self):
        p = P(2, {(2, -1): 3, (0, 0): 1})
        assert p.evaluate([Fraction(1, 2), Fraction(3)]) == 3 * Fraction(1, 4) / 3 + 1

    def test_symmetry_check(self):
        assert P(2, {(1, 0): 1, (0, 1): 1}).is_symmetric()
        assert not P(2, {(1, 0): 1}).is_symmetric()

    def test_parity_checks(self):
        assert P(2, {(2, -4): 1}).has_only_even_exponents()
        assert not P(2, {(2, 1): 1}).has_only_even_exponents()
        assert P(1, {(3,): 1, (-1,): 2}).has_only_odd_exponents()


class TestExactDivision:
    def test_perfect_cube(self):
        cube = P(1, {(2,): 1, (0,): -1}) ** 3
        assert exact_div(cube, cube, 0) == LaurentPolynomial.constant(1, 1)

    def test_two_variable_quotient(self):
        num = P(2, {(4, 0): 1, (0, 4): -1})
        den = P(2, {(2, 0): 1, (0, 2): -1})
        assert exact_div(num, den, 0) == P(2, {(2, 0): 1, (0, 2): 1})

    def test_remainder_detected(self):
        with pytest.raises(RemainderError):
            exact_div(P(1, {(2,): 1, (0,): 1}), P(1, {(2,): 1, (0,): -1}), 0)

    def test_laurent_dividend(self):
        q_true = P(1, {(-3,): 2, (1,): 5})
        d = P(1, {(2,): 1, (0,): -1}) ** 2
        assert exact_div(q_true * d, d, 0) == q_true

    def test_monomial_divisor(self):
        p = P(2, {(3, 1): 6, (0, -2): 2})
        assert exact_div(p, P(2, {(1, 1): 2}), 0) == P(2, {(2, 0): 3, (-1, -3): 1})

    def test_divisor_with_shifted_support(self):
        # Divisor whose lowest exponent is positive: quotient is Laurent.
        q_true = P(1, {(-6,): Fraction(5, 7), (0,): 1})
        d = P(1, {(4,): 1, (2,): -2})
        assert exact_div(q_true * d, d, 0) == q_true

    def test_multiply_back_property(self):
        rng = random.Random(11)
        d = P(2, {(2, 0): 1, (0, 2): -1})
        for _ in range(20):
            q = LaurentPolynomial(2, {
                (rng.randint(-4, 4), rng.randint(-4, 4)):
                    Fraction(rng.randint(-5, 5), rng.randint(1, 5))
                for _ in range(4)
            })
            if q.is_zero:
                continue
            assert exact_div(q * d, d, 0) * d == q * d


class TestSerialization:
    def test_round_trip_byte_identical(self):
        p = P(2, {(2, -4): Fraction(-3, 7), (0, 0): 5, (-1, 3): Fraction(1, 2)})
        text = p.dumps()
        again = LaurentPolynomial.loads(text)
        assert again == p
        assert again.dumps() == text

    def test_canonical_order_graded_lex(self):
        p = P(2, {(1, 1): 1, (0, 0): 1, (-2, -2): 1, (2, -1): 1})
        order = [tuple(t["exp"]) for t in p.to_json_dict()["terms"]]
        assert order == [(-2, -2), (0, 0), (2, -1), (1, 1)]

    def test_coefficient_strings(self):
        p = P(1, {(0,): Fraction(3, 4), (1,): 2})
        terms = p.to_json_dict()["terms"]
        assert terms[0]["coef"] == "3/4" and terms[1]["coef"] == "2"

    def test_plain_rendering(self):
        p = P(3, {(0, 0, 0): Fraction(-1, 16), (-2, -2, -2): Fraction(1, 16)})
        assert p.to_plain() == "1/16*z1^-2*z2^-2*z3^-2 + -1/16"


class TestRationalExpression:
    def test_equivalence_cross_multiplied(self):
        a = RationalExpression(P(1, {(1,): 2}), P(1, {(0,): 2}))
        b = RationalExpression(P(1, {(2,): 1}), P(1, {(1,): 1}))
        assert a.equivalent(b)

    def test_sum(self):
        one_over = RationalExpression(P(1, {(0,): 1}), P(1, {(1,): 1, (0,): -1}))
        other = RationalExpression(P(1, {(0,): 1}), P(1, {(1,): 1, (0,): 1}))
        total = one_over + other
        expect = RationalExpression(P(1, {(1,): 2}), P(1, {(2,): 1, (0,): -1}))
        assert total.equivalent(expect)

    def test_to_laurent(self):
        num = P(1, {(3,): 1, (1,): -1})
        den = P(1, {(1,): 1})
        assert RationalExpression(num, den).to_laurent(0) == P(1, {(2,): 1, (0,): -1})

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RationalExpression(P(1, {(0,): 1}), LaurentPolynomial.zero(1))
