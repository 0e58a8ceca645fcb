"""Free energies, wave-coefficient assembly, leading wave derivatives."""

from __future__ import annotations

from fractions import Fraction

import pytest

from eorec.curves import CurveSpec
from eorec.enumerative import double_factorial_odd, tau_from_airy
from eorec.errors import StabilityError
from eorec.free_energy import (free_energy, integrate_symmetric, s_coefficient,
                               stable_pairs_at_order)
from eorec.memo import MemoStore
from eorec.recursion import compute_w
from util import P, sym_poly

HO = CurveSpec.harmonic(Fraction(2), -1)
AIRY = CurveSpec.airy()


class TestIntegrateSymmetric:
    def test_harmonic_f03(self):
        for curve in (HO, CurveSpec.harmonic(Fraction(2), 1)):
            c = Fraction(curve.eps, 8) / curve.c2
            expect = sym_poly(3, {(1, 1, 1): c, (-1, -1, -1): c})
            assert free_energy(curve, 0, 3).poly == expect

    def test_harmonic_f11(self):
        for curve in (HO, CurveSpec.harmonic(Fraction(5), 1)):
            c = Fraction(curve.eps, 64) / curve.c2
            expect = P(1, {(3,): c / 3, (1,): -3 * c, (-1,): -3 * c, (-3,): c / 3})
            assert free_energy(curve, 1, 1).poly == expect

    def test_airy_values(self):
        assert free_energy(AIRY, 1, 1).poly == P(1, {(-3,): Fraction(-1, 48)})
        assert free_energy(AIRY, 0, 3).poly == sym_poly(
            3, {(-1, -1, -1): Fraction(-1, 2)}
        )
        assert free_energy(AIRY, 0, 4).poly == sym_poly(
            4, {(-3, -1, -1, -1): Fraction(1, 4)}
        )
        assert free_energy(AIRY, 1, 2).poly == sym_poly(
            2, {(-5, -1): Fraction(1, 32), (-3, -3): Fraction(1, 96)}
        )

    def test_differentiation_recovers_differential(self):
        store = MemoStore()
        for g, n in [(0, 3), (1, 1), (0, 4), (1, 2), (1, 3)]:
            w = compute_w(HO, g, n, store)
            f = integrate_symmetric(w)
            back = f.poly
            for var in range(n):
                back = back.diff(var)
            assert back == w.poly

    def test_odd_in_each_variable(self):
        store = MemoStore()
        for g, n in [(0, 3), (1, 2), (0, 5)]:
            f = free_energy(HO, g, n, store)
            assert f.poly.has_only_odd_exponents()
            assert f.poly.is_symmetric()

    def test_airy_leading_form(self):
        # F_{g,n} = (-1)**n / 2**(2g-2+n) * sum <tau> prod (2a-1)!!/y**(2a+1).
        store = MemoStore()
        for g, n in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)]:
            table = tau_from_airy(g, n, store)
            scale = Fraction(-1) ** n / Fraction(2) ** (2 * g - 2 + n)
            f = free_energy(AIRY, g, n, store)
            for exp, coef in f.poly.terms.items():
                a = tuple((-e - 1) // 2 for e in exp)
                weight = Fraction(1)
                for ai in a:
                    weight *= double_factorial_odd(ai - 1) if ai else 1
                assert coef == scale * table.value(*a) * weight


class TestAssembly:
    def test_pairs_at_order(self):
        assert stable_pairs_at_order(2) == [(1, 1), (0, 3)]
        assert stable_pairs_at_order(3) == [(1, 2), (0, 4)]
        assert stable_pairs_at_order(4) == [(2, 1), (1, 3), (0, 5)]

    def test_airy_s2(self):
        assert s_coefficient(AIRY, 2) == P(1, {(-3,): Fraction(-5, 48)})

    def test_airy_s4(self):
        assert s_coefficient(AIRY, 4) == P(1, {(-9,): Fraction(-1105, 9216)})

    def test_harmonic_s2_general_sign(self):
        for curve in (HO, CurveSpec.harmonic(Fraction(2), 1),
                      CurveSpec.harmonic(Fraction(7, 3), -1)):
            c = Fraction(curve.eps, 192) / curve.c2
            expect = P(1, {(-3,): 5 * c, (-1,): -9 * c, (1,): -9 * c, (3,): 5 * c})
            assert s_coefficient(curve, 2) == expect

    def test_rejects_low_order(self):
        with pytest.raises(StabilityError):
            s_coefficient(HO, 1)
