"""Residue recursion: closed forms, series backend, differentials, store."""

from __future__ import annotations

import json
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from eorec.curves import CurveSpec
from eorec.errors import InvariantViolation, StabilityError
from eorec.laurent import LaurentPolynomial, exact_div
from eorec.memo import MemoStore
from eorec.recursion import (BACKEND_CLOSED, BACKEND_SERIES, MultiDifferential,
                             check_leading_airy, compute_w, residue_basic,
                             residue_unstable, unstable_residue_primitive,
                             unstable_split_closed, unstable_split_series)
from util import P, sym_poly

HO = CurveSpec.harmonic(Fraction(2), -1)
AIRY = CurveSpec.airy()


def harmonic_w03(curve):
    c = Fraction(curve.eps, 8) / curve.c2
    return sym_poly(3, {(0, 0, 0): c, (-2, -2, -2): -c})


def harmonic_w11(curve):
    c = Fraction(curve.eps, 64) / curve.c2
    return P(1, {(2,): c, (0,): -3 * c, (-2,): 3 * c, (-4,): -c})


def harmonic_w04(curve):
    c = Fraction(1, 64) / curve.c2 ** 2
    return sym_poly(4, {
        (-4, -2, -2, -2): 3 * c,
        (-2, -2, -2, -2): -9 * c,
        (-2, -2, 0, 0): -c,
        (0, 0, 0, 0): -9 * c,
        (2, 0, 0, 0): 3 * c,
    })


def harmonic_w12(curve):
    c = Fraction(1, 512) / curve.c2 ** 2
    return sym_poly(2, {
        (-6, -2): 5 * c, (-4, -4): 3 * c, (-4, -2): -18 * c,
        (-2, -2): 27 * c, (-2, 0): -4 * c, (0, 0): 27 * c,
        (2, 0): -18 * c, (2, 2): 3 * c, (4, 0): 5 * c,
    })


class TestResidueBasic:
    def test_harmonic_closed_value(self):
        # k = 1 at the defaults: -(1 - z1**2)**3 / (32 z1**4).
        cube = P(1, {(2,): -1, (0,): 1}) ** 3
        assert residue_basic(HO, 1) == cube.times_monomial((-4,), Fraction(-1, 32))

    def test_airy_closed_value(self):
        assert residue_basic(AIRY, 1) == P(1, {(-4,): Fraction(-1, 4)})

    @pytest.mark.parametrize("k", range(-6, 9))
    def test_closed_matches_series(self, k):
        for curve in (HO, CurveSpec.harmonic(Fraction(5, 3), 1), AIRY):
            assert residue_basic(curve, k, BACKEND_CLOSED) == \
                residue_basic(curve, k, BACKEND_SERIES)


class TestResidueUnstable:
    @pytest.mark.parametrize("k", range(-6, 9))
    def test_closed_matches_series(self, k):
        for curve in (HO, CurveSpec.harmonic(Fraction(7, 2), 1)):
            assert residue_unstable(curve, k, BACKEND_CLOSED) == \
                residue_unstable(curve, k, BACKEND_SERIES)

    def test_randomized_point_oracle(self):
        rng = random.Random(42)
        ks = list(range(-6, 9))
        for _ in range(20):
            c2 = Fraction(rng.choice([i for i in range(-9, 10) if i]), rng.randint(1, 7))
            curve = CurveSpec.harmonic(c2, rng.choice([1, -1]))
            z1 = Fraction(rng.choice([i for i in range(1, 10)]), rng.randint(1, 7))
            zj = z1
            while zj * zj == z1 * z1:
                zj = Fraction(rng.choice([i for i in range(-9, 0)]), rng.randint(1, 7))
            for k in ks:
                closed = residue_unstable(curve, k, BACKEND_CLOSED)
                series = residue_unstable(curve, k, BACKEND_SERIES)
                assert closed.evaluate([z1, zj]) == series.evaluate([z1, zj])

    @pytest.mark.parametrize("k", range(-2, 5))
    def test_split_recombination(self, k):
        at_zero, at_inf = unstable_split_closed(HO, k)
        zero_s, inf_s = unstable_split_series(HO, k)
        assert at_zero == zero_s
        assert at_inf == inf_s
        assert at_zero + at_inf == residue_unstable(HO, k)


class TestFirstGeneration:
    def test_harmonic_w03(self):
        for curve in (HO, CurveSpec.harmonic(Fraction(2), 1),
                      CurveSpec.harmonic(Fraction(5, 3), -1)):
            assert compute_w(curve, 0, 3).poly == harmonic_w03(curve)

    def test_harmonic_w11(self):
        for curve in (HO, CurveSpec.harmonic(Fraction(6), 1)):
            assert compute_w(curve, 1, 1).poly == harmonic_w11(curve)

    def test_airy_first_generation(self):
        assert compute_w(AIRY, 0, 3).poly == sym_poly(3, {(-2, -2, -2): Fraction(1, 2)})
        assert compute_w(AIRY, 1, 1).poly == P(1, {(-4,): Fraction(1, 16)})

    def test_self_pairing_feed(self):
        # The (1,1) differential is -1/4 times the basic k=1 residue.
        assert compute_w(AIRY, 1, 1).poly == residue_basic(AIRY, 1).scale(Fraction(-1, 4))


class TestSecondGeneration:
    def test_airy_w04(self):
        assert compute_w(AIRY, 0, 4).poly == sym_poly(4, {(-4, -2, -2, -2): Fraction(3, 4)})

    def test_airy_w12(self):
        assert compute_w(AIRY, 1, 2).poly == sym_poly(
            2, {(-6, -2): Fraction(5, 32), (-4, -4): Fraction(3, 32)}
        )

    def test_harmonic_w04_both_signs_two_parameters(self):
        for eps in (1, -1):
            for c2 in (Fraction(2), Fraction(5, 3)):
                curve = CurveSpec.harmonic(c2, eps)
                assert compute_w(curve, 0, 4).poly == harmonic_w04(curve)

    def test_harmonic_w12_both_signs_two_parameters(self):
        for eps in (1, -1):
            for c2 in (Fraction(2), Fraction(7)):
                curve = CurveSpec.harmonic(c2, eps)
                w = compute_w(curve, 1, 2)
                assert w.poly == harmonic_w12(curve)
                assert len(w.poly.terms) == 14
                assert w.poly.coefficient((-2, -6)) == Fraction(5, 512) / c2 ** 2


class TestThirdGeneration:
    def test_airy_w05(self):
        expect = sym_poly(5, {
            (-6, -2, -2, -2, -2): Fraction(15, 8),
            (-4, -4, -2, -2, -2): Fraction(9, 4),
        })
        assert compute_w(AIRY, 0, 5).poly == expect

    def test_airy_w13(self):
        expect = sym_poly(3, {
            (-8, -2, -2): Fraction(35, 64),
            (-6, -4, -2): Fraction(15, 32),
            (-4, -4, -4): Fraction(9, 32),
        })
        assert compute_w(AIRY, 1, 3).poly == expect

    def test_airy_w21(self):
        assert compute_w(AIRY, 2, 1).poly == P(1, {(-10,): Fraction(105, 1024)})


class TestBackendEquivalence:
    @pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (1, 3)])
    def test_harmonic(self, g, n):
        closed = compute_w(HO, g, n, MemoStore(), BACKEND_CLOSED)
        series = compute_w(HO, g, n, MemoStore(), BACKEND_SERIES)
        assert closed.poly.dumps() == series.poly.dumps()

    @pytest.mark.parametrize("g,n", [(0, 4), (2, 1)])
    def test_airy(self, g, n):
        closed = compute_w(AIRY, g, n, MemoStore(), BACKEND_CLOSED)
        series = compute_w(AIRY, g, n, MemoStore(), BACKEND_SERIES)
        assert closed.poly.dumps() == series.poly.dumps()


class TestInvariants:
    def test_stability_guard(self):
        for g, n in [(0, 1), (0, 2), (-1, 3), (1, 0)]:
            with pytest.raises(StabilityError):
                compute_w(HO, g, n)

    @pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)])
    def test_structural(self, g, n):
        store = MemoStore()
        w = compute_w(HO, g, n, store)
        assert w.poly.is_symmetric()
        assert w.poly.has_only_even_exponents()
        sign = Fraction(-1) ** n
        for exp, coef in w.poly.terms.items():
            assert w.poly.coefficient(tuple(-2 - e for e in exp)) == sign * coef

    @pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)])
    def test_leading_pole_correspondence(self, g, n):
        for curve in (HO, CurveSpec.harmonic(Fraction(9, 4), 1)):
            w_h = compute_w(curve, g, n)
            w_a = compute_w(AIRY, g, n)
            check_leading_airy(w_h, w_a)

    def test_leading_pole_mismatch_detected(self):
        w_a = compute_w(AIRY, 1, 1)
        fake = MultiDifferential(1, 1, HO, compute_w(HO, 1, 1).poly.scale(2))
        with pytest.raises(InvariantViolation):
            check_leading_airy(fake, w_a)


class TestUnstablePrimitive:
    @pytest.mark.parametrize("a", [1, 2, 3, 4])
    def test_specialized_action_closed_form(self, a):
        # Acting on the derivative of s**-(2a-1) and setting both slots to z
        # gives -(2a-1)(z**2-1)**2 ((a-2) z**2 - a - 1) / z**(2a+3).
        action = unstable_residue_primitive(a).scale(-(2 * a - 1))
        merged = action.identify(1, 0)
        sq = P(1, {(2,): 1, (0,): -1}) ** 2
        bracket = P(1, {(2,): a - 2, (0,): -a - 1})
        expect = (sq * bracket).times_monomial((-2 * a - 3,), -(2 * a - 1))
        assert merged == expect

    @pytest.mark.parametrize("a", [1, 2, 3])
    def test_equivalent_second_order_form(self, a):
        # The same value equals -z**2/(2 (z**2-1)**3) A**2 z**-(2a-1) with
        # A = (z**2-1)**3 z**-2 d/dz.
        cube = P(1, {(2,): 1, (0,): -1}) ** 3

        def a_op(p):
            return (cube * p.diff(0)).times_monomial((-2,))

        a2 = a_op(a_op(P(1, {(-(2 * a - 1),): 1})))
        alt = exact_div(a2, cube, 0).times_monomial((2,), Fraction(-1, 2))
        merged = unstable_residue_primitive(a).scale(-(2 * a - 1)).identify(1, 0)
        assert merged == alt

    def test_spot_value(self):
        merged = unstable_residue_primitive(1).scale(-1).identify(1, 0)
        z = Fraction(3, 2)
        expect = -(z * z - 1) ** 2 * (-z * z - 2) / z ** 5
        assert merged.evaluate([z]) == expect


class TestMemoStore:
    def test_disk_round_trip(self, tmp_path):
        store = MemoStore(tmp_path)
        w = compute_w(HO, 1, 2, store)
        fresh = MemoStore(tmp_path)
        loaded = fresh.get(HO, 1, 2)
        assert loaded is not None
        assert loaded.dumps() == w.poly.dumps()

    def test_cache_entry_identical_to_recomputation(self, tmp_path):
        store = MemoStore(tmp_path)
        compute_w(HO, 0, 4, store)
        warm = MemoStore(tmp_path)
        cached = compute_w(HO, 0, 4, warm)
        cold = compute_w(HO, 0, 4, MemoStore())
        assert cached.poly.dumps() == cold.poly.dumps()

    def test_validate_one(self, tmp_path):
        store = MemoStore(tmp_path)
        compute_w(HO, 0, 3, store)
        compute_w(HO, 1, 2, store)
        ok = store.validate_one(
            lambda curve, g, n: compute_w(curve, g, n, MemoStore()).poly
        )
        assert ok

    def test_parameter_isolation(self, tmp_path):
        store = MemoStore(tmp_path)
        compute_w(HO, 0, 3, store)
        other = CurveSpec.harmonic(Fraction(3), -1)
        assert MemoStore(tmp_path).get(other, 0, 3) is None

    def test_engine_version_guard(self, tmp_path):
        store = MemoStore(tmp_path)
        compute_w(HO, 0, 3, store)
        path = next(tmp_path.glob("*.json"))
        data = json.loads(path.read_text())
        data["engine_version"] = "0-stale"
        path.write_text(json.dumps(data))
        assert MemoStore(tmp_path).get(HO, 0, 3) is None

    def test_concurrent_computation(self, tmp_path):
        store = MemoStore(tmp_path)
        targets = [(0, 4), (1, 2), (0, 5), (1, 3)]
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda t: compute_w(HO, *t, store), targets))
        for (g, n), got in zip(targets, results):
            assert got.poly.dumps() == compute_w(HO, g, n, MemoStore()).poly.dumps()
