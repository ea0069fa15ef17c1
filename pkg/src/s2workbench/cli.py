"""Command line front end.

Every verb prints one JSON object on standard output.  Exit status is 0 on
success (or when ``verify`` passes), 1 on a computation error or failed
verification, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import operators as ops
from . import spaces, verify
from .errors import WorkbenchError
from .series import CoefficientSeries, DiskAutomorphism, divide_by_linear


VERBS = ("norm", "kernel", "matrix", "opnorm", "wconorm", "spectrum", "membership",
         "isometry", "compactness", "factor", "verify")


def complex_arg(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _add_series(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--in", dest="infile", metavar="PATH", help='series JSON {"coeffs": [[re, im], ...]}')
    g.add_argument("--coeffs", metavar="STR", help='inline coefficients "re,im;re,im;..."')


def _add_automorphism(p, default=None):
    p.add_argument("--a", type=complex_arg, default=default, metavar="RE,IM",
                   help="automorphism point a (|a| < 1)")
    p.add_argument("--theta", type=float, default=0.0, metavar="REAL", help="automorphism rotation angle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s2workbench",
        description="Multiplication and weighted composition operators on S^2, numerically.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("norm", help="series norm in a chosen space")
    _add_series(p)
    p.add_argument("--space", choices=["hardy", "bergman", "dirichlet", "s2"], default="s2")
    p.add_argument("--beta", type=float, default=0.0, help="Bergman weight (beta > -1)")

    p = sub.add_parser("kernel", help="reproducing kernel norm (and value with --z)")
    p.add_argument("--space", choices=["hardy", "bergman", "dirichlet", "s2"], default="s2")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--w", type=complex_arg, required=True, metavar="RE,IM")
    p.add_argument("--z", type=complex_arg, default=None, metavar="RE,IM")
    p.add_argument("--budget", type=int, default=None, help="S^2 partial-sum length (default: tail < 1e-12)")

    p = sub.add_parser("matrix", help="finite-section matrix of M_psi, or W_{psi,phi} with --a")
    _add_series(p)
    p.add_argument("--section", type=int, default=8)
    _add_automorphism(p)

    p = sub.add_parser("opnorm", help="finite-section norm of M_psi with theoretical bounds")
    _add_series(p)
    p.add_argument("--section", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=4096)

    p = sub.add_parser("wconorm", help="finite-section norm of W_{psi,phi} with theoretical bounds")
    _add_series(p)
    p.add_argument("--section", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_automorphism(p, default=0j)

    p = sub.add_parser("spectrum", help="sample psi over the closed disk")
    _add_series(p)
    p.add_argument("--samples", type=int, default=ops.ANGULAR_STEPS, help="angular steps")
    p.add_argument("--section", type=int, default=ops.RADIAL_STEPS, help="radial steps")
    p.add_argument("--csv", metavar="PATH", help="also write re,im rows of the samples")

    p = sub.add_parser("membership", help="is lambda in the spectrum of M_psi?")
    _add_series(p)
    p.add_argument("--lambda", dest="lam", type=complex_arg, required=True, metavar="RE,IM")
    p.add_argument("--tol", type=float, default=None, help="inside margin (default: grid guard)")
    p.add_argument("--budget", type=int, default=256)

    p = sub.add_parser("isometry", help="isometry defect of M_psi")
    _add_series(p)

    p = sub.add_parser("compactness", help="d_n = ||psi e_n|| for n = 1..section")
    _add_series(p)
    p.add_argument("--section", type=int, default=50)

    p = sub.add_parser("factor", help="synthetic division by (z - w)")
    _add_series(p)
    p.add_argument("--w", type=complex_arg, required=True, metavar="RE,IM")

    p = sub.add_parser("verify", help="run the seeded property harness")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-9)

    return parser


def parse_arguments(argv=None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _finite(obj):
    # JSON has no inf/nan; an Uncertain certificate may carry them
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def _load_series(args) -> CoefficientSeries:
    if args.coeffs is not None:
        return CoefficientSeries.from_inline(args.coeffs)
    with open(args.infile) as fh:
        return CoefficientSeries.from_dict(json.load(fh))


def _space(args) -> spaces.SpaceTag:
    return spaces.SpaceTag(args.space, args.beta if args.space == "bergman" else None)


def _automorphism(args) -> DiskAutomorphism | None:
    if args.a is None:
        return None
    return DiskAutomorphism(args.a, args.theta)


def execute(args) -> tuple[int, dict]:
    verb = args.verb
    if verb == "verify":
        config = verify.TrialConfig(seed=args.seed, trials=args.trials, tolerance=args.tol)
        report = verify.run_all(config)
        return (0 if verify.all_passed(report) else 1), report

    if verb == "kernel":
        space = _space(args)
        out = {
            "space": space.kind,
            "beta": space.beta,
            "w": _pair(args.w),
            "normSquared": spaces.kernel_norm_squared(space, args.w, args.budget),
        }
        if args.z is not None:
            out["z"] = _pair(args.z)
            out["value"] = _pair(spaces.kernel_value(space, args.w, args.z, args.budget))
        return 0, out

    f = _load_series(args)
    if verb == "norm":
        return 0, spaces.series_norm(_space(args), f).to_dict()
    if verb == "matrix":
        phi = _automorphism(args)
        if phi is None:
            return 0, ops.multiplier_matrix(f, args.section).to_dict()
        return 0, ops.weighted_composition_matrix(f, phi, args.section).to_dict()
    if verb == "opnorm":
        return 0, ops.mop_norm_bounds(f, args.section, tol=args.tol, samples=args.samples).to_dict()
    if verb == "wconorm":
        return 0, ops.wco_norm_bounds(f, _automorphism(args), args.section, tol=args.tol).to_dict()
    if verb == "spectrum":
        report = ops.spectrum_sample(f, args.section, args.samples)
        if args.csv:
            report.write_csv(args.csv)
        return 0, report.to_dict()
    if verb == "membership":
        return 0, ops.spectrum_membership(f, args.lam, args.tol, args.budget).to_dict()
    if verb == "isometry":
        return 0, {"defect": ops.isometry_defect(f)}
    if verb == "compactness":
        d = ops.compactness_diagnostic(f, args.section)
        return 0, {"d": d.tolist(), "min": float(np.min(d))}
    if verb == "factor":
        q, r = divide_by_linear(f, args.w)
        return 0, {"quotient": q.to_dict()["coeffs"], "remainder": _pair(r)}
    raise AssertionError(verb)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        code, out = execute(args)
    except WorkbenchError as exc:
        code, out = 1, {"error": exc.code, "detail": str(exc)}
    except (ValueError, OSError) as exc:
        code, out = 1, {"error": type(exc).__name__, "detail": str(exc)}
    if code and "error" in out:
        print(f"error: {out['error']}: {out['detail']}", file=sys.stderr)
    json.dump(_finite(out), sys.stdout)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
