"""Named verification suites driving the cross-checks between modules.

Each suite returns a deterministic report dict: an ordered list of checks,
each with a stable name and a pass/fail status.  Suites:

* ``lemma51``: closed-form kernel residues against the series backend,
  including the single-point split with step-function factors and a
  randomized evaluation oracle; backend equivalence of full differentials.
* ``theorem41``: assembled wave coefficients against the independent wave
  recursion (exact at even orders, constant offset at odd ones), pinned
  low-order values, and the summed derivative identity.
* ``theorem61``: Poincare pipelines against each other, pinned initial
  polynomials, the differentiation identity, prefactor independence.
* ``tau``: intersection-number extraction along both routes, pinned values,
  and the leading-pole correspondence between the two curves.
* ``all``: every suite above.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .curves import CurveSpec
from .enumerative import (check_poincare_differential, poincare_by_recursion,
                          poincare_from_harmonic, tau_from_airy, tau_from_harmonic)
from .errors import MismatchError
from .laurent import LaurentPolynomial
from .memo import MemoStore
from .recursion import (BACKEND_CLOSED, BACKEND_SERIES, check_leading_airy,
                        compute_w, is_stable, residue_basic, residue_unstable,
                        unstable_split_closed, unstable_split_series)
from .wkb import (compare_with_assembly, energy_residues,
                  free_energy_recursion_sides, initial_series, quantized_level,
                  subleading_contour_contribution, wkb_extend)

SUITES = ("lemma51", "theorem41", "theorem61", "tau", "all")

_RESIDUE_K_RANGE = range(-6, 9)
_SPLIT_K_RANGE = range(-2, 5)
_RANDOM_POINTS = 20
_RANDOM_SEED = 20240917


def stable_pairs_up_to(level: int) -> list[tuple[int, int]]:
    pairs = []
    for g in range(0, level // 2 + 2):
        for n in range(1, level + 3):
            if is_stable(g, n) and 2 * g - 2 + n <= level:
                pairs.append((g, n))
    return sorted(pairs, key=lambda p: (2 * p[0] - 2 + p[1], p))


def _random_fraction(rng: random.Random) -> Fraction:
    num = rng.choice([i for i in range(-9, 10) if i != 0])
    den = rng.randint(1, 7)
    return Fraction(num, den)


class _Report:
    def __init__(self, suite: str, level: int):
        self.data = {"suite": suite, "level": level, "checks": []}

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if detail:
            entry["detail"] = detail
        self.data["checks"].append(entry)

    def guard(self, name: str, fn) -> None:
        """Run fn; a False return or any engine error records a failure."""
        try:
            result = fn()
            self.add(name, result is None or bool(result))
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed silently
            self.add(name, False, f"{type(exc).__name__}: {exc}")

    def close(self) -> dict:
        checks = self.data["checks"]
        self.data["passed"] = sum(1 for c in checks if c["status"] == "pass")
        self.data["failed"] = sum(1 for c in checks if c["status"] == "fail")
        self.data["ok"] = self.data["failed"] == 0
        return self.data


def _default_curves(curve: CurveSpec | None) -> tuple[CurveSpec, CurveSpec]:
    harmonized = curve if curve is not None and curve.is_harmonic else CurveSpec.harmonic()
    return harmonized, CurveSpec.airy()


def run_lemma51(level: int = 4, curve: CurveSpec | None = None) -> dict:
    report = _Report("lemma51", level)
    ho, airy = _default_curves(curve)

    for k in _RESIDUE_K_RANGE:
        report.guard(
            f"residue-basic-closed-vs-series/ho/k={k}",
            lambda k=k: residue_basic(ho, k, BACKEND_CLOSED)
            == residue_basic(ho, k, BACKEND_SERIES),
        )
    for k in _RESIDUE_K_RANGE:
        report.guard(
            f"residue-basic-closed-vs-series/airy/k={k}",
            lambda k=k: residue_basic(airy, k, BACKEND_CLOSED)
            == residue_basic(airy, k, BACKEND_SERIES),
        )
    for k in _RESIDUE_K_RANGE:
        report.guard(
            f"residue-unstable-closed-vs-series/k={k}",
            lambda k=k: residue_unstable(ho, k, BACKEND_CLOSED)
            == residue_unstable(ho, k, BACKEND_SERIES),
        )

    rng = random.Random(_RANDOM_SEED)
    for i in range(_RANDOM_POINTS):
        z1 = _random_fraction(rng)
        zj = _random_fraction(rng)
        while zj * zj == z1 * z1:
            zj = _random_fraction(rng)
        c2 = _random_fraction(rng)
        point_curve = CurveSpec.harmonic(c2, rng.choice([1, -1]))
        k = rng.choice(list(_RESIDUE_K_RANGE))

        def one_point(point_curve=point_curve, k=k, z1=z1, zj=zj):
            closed = residue_unstable(point_curve, k, BACKEND_CLOSED)
            series = residue_unstable(point_curve, k, BACKEND_SERIES)
            return closed.evaluate([z1, zj]) == series.evaluate([z1, zj])

        report.guard(f"residue-unstable-random-point/{i}", one_point)

    for k in _SPLIT_K_RANGE:
        def split(k=k):
            zero_c, inf_c = unstable_split_closed(ho, k)
            zero_s, inf_s = unstable_split_series(ho, k)
            total = residue_unstable(ho, k, BACKEND_CLOSED)
            return (zero_c == zero_s and inf_c == inf_s
                    and zero_c + inf_c == total)
        report.guard(f"residue-unstable-split-recombines/k={k}", split)

    cap = min(level, 4)
    for curve_case in (ho, airy):
        closed_store, series_store = MemoStore(), MemoStore()
        for g, n in stable_pairs_up_to(cap):
            report.guard(
                f"backend-equivalence/{curve_case.kind}/g={g}/n={n}",
                lambda c=curve_case, g=g, n=n: compute_w(c, g, n, closed_store,
                                                         BACKEND_CLOSED).poly.dumps()
                == compute_w(c, g, n, series_store, BACKEND_SERIES).poly.dumps(),
            )
    return report.close()


def run_theorem41(level: int = 4, curve: CurveSpec | None = None) -> dict:
    report = _Report("theorem41", level)
    ho, airy = _default_curves(curve)
    store = MemoStore()
    m_max = level + 1

    airy_series = wkb_extend(initial_series(airy), max(4, min(m_max, 6)))
    report.guard(
        "airy-oracle-low-orders",
        lambda: (
            airy_series.s(2) == LaurentPolynomial(1, {(-3,): Fraction(-5, 48)})
            and airy_series.s(3) == LaurentPolynomial(1, {(-6,): Fraction(5, 64)})
            and airy_series.s(4) == LaurentPolynomial(1, {(-9,): Fraction(-1105, 9216)})
        ),
    )

    s2 = initial_series(ho).s(2)
    c = Fraction(ho.eps, 192) / ho.c2
    report.guard(
        "harmonic-order2-seed",
        lambda: s2 == LaurentPolynomial(
            1, {(-3,): 5 * c, (-1,): -9 * c, (1,): -9 * c, (3,): 5 * c}
        ),
    )

    for m in range(2, m_max + 1):
        def compare(m=m):
            outcome = compare_with_assembly(ho, m, store)
            # Even orders must agree exactly; odd orders may carry any
            # constant offset (a MismatchError would fail the guard).
            return outcome.exact if m % 2 == 0 else True
        report.guard(f"assembly-matches-oracle/m={m}", compare)

    # The odd-order offset at m = 3 against the closed-form image is pinned
    # to -1/(32 c**4) by the acceptance suite; here record the raw offset.
    def offset3():
        outcome = compare_with_assembly(ho, 3, store)
        return outcome.offset == Fraction(1, 256) / (ho.c2 ** 2)
    if m_max >= 3:
        report.guard("assembly-oracle-offset/m=3", offset3)

    for m in range(3, m_max + 1):
        def sides(m=m):
            lhs, rhs_f, rhs_w = free_energy_recursion_sides(ho, m, store)
            return lhs == rhs_f and (ho.eps != -1 or rhs_f == rhs_w)
        report.guard(f"derivative-identity-resummation/m={m}", sides)
    return report.close()


def run_theorem61(level: int = 4, curve: CurveSpec | None = None) -> dict:
    report = _Report("theorem61", level)
    ho, _ = _default_curves(curve)
    store = MemoStore()

    report.guard(
        "initial-data-1-1",
        lambda: poincare_from_harmonic(ho, 1, 1, store).poly
        == poincare_by_recursion(1, 1).poly,
    )
    report.guard(
        "initial-data-0-3",
        lambda: poincare_from_harmonic(ho, 0, 3, store).poly
        == poincare_by_recursion(0, 3).poly,
    )
    for g, n in stable_pairs_up_to(level):
        if 2 * g - 2 + n < 2:
            continue
        report.guard(
            f"pipelines-agree/g={g}/n={n}",
            lambda g=g, n=n: poincare_from_harmonic(ho, g, n, store).poly
            == poincare_by_recursion(g, n).poly,
        )
    reference = CurveSpec.harmonic(Fraction(2), -1)
    ref_store = store if ho == reference else MemoStore()
    for g, n in stable_pairs_up_to(min(level, 3)):
        report.guard(
            f"differentiation-identity/g={g}/n={n}",
            lambda g=g, n=n: check_poincare_differential(reference, g, n, ref_store),
        )
    report.guard(
        "prefactor-independence",
        lambda: poincare_from_harmonic(
            CurveSpec.harmonic(Fraction(6), -1), 1, 2, MemoStore()
        ).poly == poincare_from_harmonic(reference, 1, 2, ref_store).poly,
    )
    return report.close()


def run_tau(level: int = 4, curve: CurveSpec | None = None) -> dict:
    report = _Report("tau", level)
    ho, _ = _default_curves(curve)
    store, astore = MemoStore(), MemoStore()

    report.guard("tau-0-3", lambda: tau_from_airy(0, 3, astore).value(0, 0, 0) == 1)
    report.guard("tau-1-1", lambda: tau_from_airy(1, 1, astore).value(1) == Fraction(1, 24))
    if level >= 3:
        report.guard(
            "tau-2-1", lambda: tau_from_airy(2, 1, astore).value(4) == Fraction(1, 1152)
        )
    for g, n in stable_pairs_up_to(min(level, 4)):
        report.guard(
            f"tau-cross-route/g={g}/n={n}",
            lambda g=g, n=n: tau_from_harmonic(ho, g, n, store, astore).entries
            == tau_from_airy(g, n, astore).entries,
        )
    for g, n in stable_pairs_up_to(min(level, 4)):
        report.guard(
            f"leading-pole-correspondence/g={g}/n={n}",
            lambda g=g, n=n: check_leading_airy(
                compute_w(ho, g, n, store), compute_w(CurveSpec.airy(), g, n, astore)
            ) is None,
        )
    return report.close()


def run_energy(level: int = 4, curve: CurveSpec | None = None) -> dict:
    report = _Report("energy", level)
    for c2 in (Fraction(2), Fraction(6), Fraction(5, 3)):
        def residues(c2=c2):
            first, second = energy_residues(CurveSpec.harmonic(c2, -1))
            return first == c2 / 2 and second == -1
        report.guard(f"residues-at-infinity/c2={c2}", residues)
    report.guard(
        "subleading-contour-contribution",
        lambda: subleading_contour_contribution(CurveSpec.harmonic()) == Fraction(-1, 2),
    )
    report.guard(
        "integer-levels",
        lambda: all(quantized_level(2 * n + 1, 1) == n for n in range(4)),
    )
    return report.close()


_RUNNERS = {
    "lemma51": run_lemma51,
    "theorem41": run_theorem41,
    "theorem61": run_theorem61,
    "tau": run_tau,
    "energy": run_energy,
}


def run_structural(level: int, curve: CurveSpec | None = None) -> dict:
    """Symmetry, parity, pairing and leading-pole checks for every stable
    pair up to the level.  The engine enforces the first three on every
    computed differential; this re-asserts them explicitly."""
    report = _Report("structural", level)
    ho, airy = _default_curves(curve)
    store, astore = MemoStore(), MemoStore()
    for g, n in stable_pairs_up_to(level):
        def one(g=g, n=n):
            w_h = compute_w(ho, g, n, store)
            w_a = compute_w(airy, g, n, astore)
            if not (w_h.poly.is_symmetric() and w_a.poly.is_symmetric()):
                return False
            if not (w_h.poly.has_only_even_exponents()
                    and w_a.poly.has_only_even_exponents()):
                return False
            sign = Fraction(-1) ** n
            for exp, coef in w_h.poly.terms.items():
                if w_h.poly.coefficient(tuple(-2 - e for e in exp)) != sign * coef:
                    return False
            check_leading_airy(w_h, w_a)
            return True
        report.guard(f"structural/g={g}/n={n}", one)
    return report.close()


def run_suite(suite: str, level: int = 4, curve: CurveSpec | None = None) -> dict:
    if suite == "all":
        sections = [run_lemma51(level, curve), run_theorem41(level, curve),
                    run_theorem61(level, curve), run_tau(level, curve),
                    run_energy(level, curve), run_structural(min(level, 4), curve)]
        checks = []
        for section in sections:
            for entry in section["checks"]:
                checks.append({**entry, "name": f"{section['suite']}/{entry['name']}"})
        data = {"suite": "all", "level": level, "checks": checks}
        data["passed"] = sum(1 for c in checks if c["status"] == "pass")
        data["failed"] = sum(1 for c in checks if c["status"] == "fail")
        data["ok"] = data["failed"] == 0
        return data
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    return _RUNNERS[suite](level, curve)
