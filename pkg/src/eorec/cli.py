"""Command-line front end.

Subcommands compute and emit differentials, free energies, wave
coefficients, intersection tables, Poincare polynomials and energy levels,
and run the verification suites.  Identical invocations produce
byte-identical output.  Exit codes: 0 success, 1 violated invariant or
failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import verify
from .curves import CurveSpec
from .enumerative import (poincare_by_recursion, poincare_from_harmonic,
                          tau_from_airy, tau_from_harmonic)
from .errors import (IncompleteError, InvariantViolation, LogTermError,
                     MismatchError, NonExpandableError, OddPowerOfCError,
                     RemainderError, ShapeError, StabilityError)
from .free_energy import free_energy, s_coefficient
from .laurent import LaurentPolynomial
from .memo import ENGINE_VERSION, MemoStore, resolve_cache_dir
from .recursion import BACKEND_CLOSED, BACKEND_SERIES, compute_w
from .wkb import energy_level, initial_series, quantized_level, wkb_extend

_ENGINE_ERRORS = (InvariantViolation, MismatchError, RemainderError,
                  LogTermError, NonExpandableError, OddPowerOfCError,
                  ShapeError, StabilityError, IncompleteError)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _add_curve_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--curve", choices=("airy", "ho"), default="ho")
    parser.add_argument("--c2", type=_fraction, default=Fraction(2))
    parser.add_argument("--eps", type=int, choices=(1, -1), default=-1)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "plain", "latex"), default="json")
    parser.add_argument("--backend", choices=(BACKEND_CLOSED, BACKEND_SERIES, "both"),
                        default=BACKEND_CLOSED)
    parser.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $SPECTRAL_CACHE or .cache)")
    parser.add_argument("--no-cache", action="store_true",
                        help="do not persist results to disk")


def _curve(args) -> CurveSpec:
    if args.curve == "airy":
        return CurveSpec.airy()
    return CurveSpec.harmonic(args.c2, args.eps)


def _store(args) -> MemoStore:
    if getattr(args, "no_cache", False):
        return MemoStore()
    return MemoStore(resolve_cache_dir(getattr(args, "cache_dir", None)))


def _var_names(curve: CurveSpec, arity: int) -> list[str]:
    base = "z" if curve.is_harmonic else "y"
    if arity == 1:
        return [base]
    return [f"{base}{i + 1}" for i in range(arity)]


def _latex_names(curve: CurveSpec, arity: int) -> list[str]:
    base = "z" if curve.is_harmonic else "y"
    if arity == 1:
        return [base]
    return [f"{base}_{{{i + 1}}}" for i in range(arity)]


def _emit_poly(args, curve: CurveSpec, poly: LaurentPolynomial, meta: dict,
               differential: bool = False) -> None:
    if args.format == "json":
        payload = dict(meta)
        payload["engine_version"] = ENGINE_VERSION
        payload["poly"] = poly.to_json_dict()
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    elif args.format == "plain":
        print(poly.to_plain(_var_names(curve, poly.arity)))
    else:
        body = poly.to_latex(_latex_names(curve, poly.arity))
        if differential:
            base = "z" if curve.is_harmonic else "y"
            tail = f"\\, d{base}" if poly.arity == 1 else f"\\, d{base}_{{[{poly.arity}]}}"
            body = f"\\left( {body} \\right){tail}"
        print(body)


def _compute_with_backend(args, curve: CurveSpec, g: int, n: int, store: MemoStore):
    if args.backend == "both":
        closed = compute_w(curve, g, n, store, BACKEND_CLOSED)
        fresh = compute_w(curve, g, n, MemoStore(), BACKEND_SERIES)
        if closed.poly.dumps() != fresh.poly.dumps():
            raise MismatchError(f"backends disagree on w_({g},{n})")
        return closed
    return compute_w(curve, g, n, store, args.backend)


def _cmd_w(args) -> int:
    curve = _curve(args)
    w = _compute_with_backend(args, curve, args.g, args.n, _store(args))
    meta = {"kind": "w", "curve": curve.kind, "c2": str(curve.c2),
            "eps": curve.eps, "g": args.g, "n": args.n}
    _emit_poly(args, curve, w.poly, meta, differential=True)
    return 0


def _cmd_f(args) -> int:
    curve = _curve(args)
    store = _store(args)
    backend = BACKEND_CLOSED if args.backend == "both" else args.backend
    f = free_energy(curve, args.g, args.n, store, backend)
    meta = {"kind": "f", "curve": curve.kind, "c2": str(curve.c2),
            "eps": curve.eps, "g": args.g, "n": args.n}
    _emit_poly(args, curve, f.poly, meta)
    return 0


def _cmd_s(args) -> int:
    curve = _curve(args)
    if args.route == "assembly":
        backend = BACKEND_CLOSED if args.backend == "both" else args.backend
        poly = s_coefficient(curve, args.m, _store(args), backend)
    else:
        poly = wkb_extend(initial_series(curve), max(args.m, 2)).s(args.m)
    meta = {"kind": "s", "curve": curve.kind, "c2": str(curve.c2),
            "eps": curve.eps, "m": args.m, "route": args.route}
    _emit_poly(args, curve, poly, meta)
    return 0


def _cmd_tau(args) -> int:
    curve = _curve(args)
    store = _store(args)
    if curve.is_harmonic:
        table = tau_from_harmonic(curve, args.g, args.n, store, MemoStore())
    else:
        table = tau_from_airy(args.g, args.n, store)
    payload = table.to_json_dict()
    payload["curve"] = curve.kind
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    return 0


def _cmd_poincare(args) -> int:
    curve = _curve(args)
    if args.route == "recursion":
        p = poincare_by_recursion(args.g, args.n)
    else:
        curve.require_harmonic()
        p = poincare_from_harmonic(curve, args.g, args.n, _store(args))
    meta = {"kind": "poincare", "route": args.route, "g": args.g, "n": args.n,
            "curve": curve.kind, "c2": str(curve.c2), "eps": curve.eps}
    _emit_poly(args, curve, p.poly, meta)
    return 0


def _cmd_energy(args) -> int:
    level = quantized_level(args.c2, args.hbar)
    energy = energy_level(level, args.hbar, args.omega)
    if args.format == "json":
        print(json.dumps({"kind": "energy", "c2": str(args.c2),
                          "hbar": str(args.hbar), "omega": str(args.omega),
                          "n": str(level), "E": str(energy)},
                         sort_keys=True, separators=(",", ":")))
    else:
        print(f"n = {level}")
        print(f"E = {energy}")
    return 0


def _cmd_verify(args) -> int:
    curve = _curve(args)
    store = _store(args)
    if store.directory is not None and store.cached_keys():
        ok = store.validate_one(
            lambda c, g, n: compute_w(c, g, n, MemoStore(), BACKEND_CLOSED).poly
        )
        if not ok:
            print("cache validation failed", file=sys.stderr)
            return 1
    report = verify.run_suite(args.suite, args.level, curve)
    print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eorec",
        description="Exact topological recursion on the Airy and harmonic "
                    "oscillator spectral curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_w = sub.add_parser("w", help="stable differential w_{g,n}")
    _add_curve_flags(p_w)
    _add_output_flags(p_w)
    p_w.add_argument("--g", type=int, required=True)
    p_w.add_argument("--n", type=int, required=True)
    p_w.set_defaults(fn=_cmd_w)

    p_f = sub.add_parser("f", help="free energy F_{g,n}")
    _add_curve_flags(p_f)
    _add_output_flags(p_f)
    p_f.add_argument("--g", type=int, required=True)
    p_f.add_argument("--n", type=int, required=True)
    p_f.set_defaults(fn=_cmd_f)

    p_s = sub.add_parser("s", help="wave coefficient S_m")
    _add_curve_flags(p_s)
    _add_output_flags(p_s)
    p_s.add_argument("--m", type=int, required=True)
    p_s.add_argument("--route", choices=("assembly", "oracle"), default="assembly")
    p_s.set_defaults(fn=_cmd_s)

    p_tau = sub.add_parser("tau", help="psi-class intersection numbers")
    _add_curve_flags(p_tau)
    _add_output_flags(p_tau)
    p_tau.add_argument("--g", type=int, required=True)
    p_tau.add_argument("--n", type=int, required=True)
    p_tau.set_defaults(fn=_cmd_tau)

    p_poin = sub.add_parser("poincare", help="Poincare polynomial of RG_{g,n}")
    _add_curve_flags(p_poin)
    _add_output_flags(p_poin)
    p_poin.add_argument("--g", type=int, required=True)
    p_poin.add_argument("--n", type=int, required=True)
    p_poin.add_argument("--route", choices=("integral", "recursion"),
                        default="integral")
    p_poin.set_defaults(fn=_cmd_poincare)

    p_energy = sub.add_parser("energy", help="quantized level from c**2 and hbar")
    p_energy.add_argument("--c2", type=_fraction, required=True)
    p_energy.add_argument("--hbar", type=_fraction, required=True)
    p_energy.add_argument("--omega", type=_fraction, default=Fraction(1))
    p_energy.add_argument("--format", choices=("json", "plain"), default="json")
    p_energy.set_defaults(fn=_cmd_energy)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    _add_curve_flags(p_verify)
    _add_output_flags(p_verify)
    p_verify.add_argument("--suite", choices=verify.SUITES, default="all")
    p_verify.add_argument("--level", type=int, default=4)
    p_verify.set_defaults(fn=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _ENGINE_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
