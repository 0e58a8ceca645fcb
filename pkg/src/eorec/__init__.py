"""Exact topological recursion on the Airy and harmonic oscillator curves.

Everything is computed over arbitrary-precision rationals: the stable
multi-differentials of the residue recursion, their free energies and the
wave-coefficient assembly, the independent wave recursion, Bohr-Sommerfeld
energy levels, psi-class intersection numbers, and Poincare polynomials of
metric ribbon graph orbifolds, each with a second, independent route used
as a continuous cross-check.
"""

from .curves import CurveSpec, coordinate_map, initial_w01, initial_w02, kernel, to_z_coordinates
from .enumerative import (PoincarePolynomial, TauTable, poincare_by_recursion,
                          poincare_from_harmonic, tau_from_airy, tau_from_harmonic)
from .errors import (ArityError, IncompleteError, InvariantViolation,
                     LogTermError, MismatchError, NonExpandableError,
                     OddPowerOfCError, RemainderError, ShapeError, StabilityError)
from .expansion import (residue_at_infinity, residue_at_zero,
                        series_coefficient, series_prefix, sqrt_series)
from .free_energy import FreeEnergy, free_energy, integrate_symmetric, s01_prime, s_coefficient
from .laurent import LaurentPolynomial, RationalExpression, exact_div
from .memo import ENGINE_VERSION, MemoStore
from .recursion import (BACKEND_CLOSED, BACKEND_SERIES, MultiDifferential,
                        compute_w, residue_basic, residue_unstable)
from .verify import run_suite
from .wkb import (WkbSeries, compare_with_assembly, energy_level,
                  energy_residues, initial_series, quantized_level, wkb_extend)

__version__ = "0.1.0"

__all__ = [
    "ArityError", "BACKEND_CLOSED", "BACKEND_SERIES", "CurveSpec",
    "ENGINE_VERSION", "FreeEnergy", "IncompleteError", "InvariantViolation",
    "LaurentPolynomial", "LogTermError", "MemoStore", "MismatchError",
    "MultiDifferential", "NonExpandableError", "OddPowerOfCError",
    "PoincarePolynomial", "RationalExpression", "RemainderError", "ShapeError",
    "StabilityError", "TauTable", "WkbSeries", "compare_with_assembly",
    "compute_w", "coordinate_map", "energy_level", "energy_residues",
    "exact_div", "free_energy", "initial_series", "initial_w01", "initial_w02",
    "integrate_symmetric", "kernel", "poincare_by_recursion",
    "poincare_from_harmonic", "quantized_level", "residue_at_infinity",
    "residue_at_zero", "residue_basic", "residue_unstable", "run_suite",
    "s01_prime", "s_coefficient", "series_coefficient", "series_prefix",
    "sqrt_series", "tau_from_airy", "tau_from_harmonic", "to_z_coordinates",
    "wkb_extend",
]
