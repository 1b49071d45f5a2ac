"""Command-line front end.

Exit codes: 0 pass, 1 verification failure or empty Omega intersection, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import EmptyRegionError, GeometryError
from .hyperbolic import MixedKillingField
from .mesh import build_profile, generate_mesh
from .profiles import DEFAULT_MARGIN
from .verify import SCHEMA_VERSION, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SPECIALS = {
    "geodesic-spherical": ("spherical", "geodesic"),
    "geodesic-hyperbolic": ("hyperbolic", "geodesic"),
    "linear": (None, "linear"),
}


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {val}")
    return val


def _sign(text):
    return {"plus": 1, "minus": -1}[text]


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(payload, path):
    text = _dump(payload)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _shared(parser, measure_default):
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--measure", choices=["bh", "ht", "both"], default=measure_default)
    parser.add_argument("--out", default=None, help="output path (mesh or report)")
    parser.add_argument("--format", choices=["obj", "csv", "both"], default="obj")
    parser.add_argument("--report", default=None, help="structured report path (default: stdout)")
    parser.add_argument("--margin", type=float, default=DEFAULT_MARGIN,
                        help="distance kept from singular values of s")


def _surface_flags(parser, special_default=None):
    parser.add_argument("--type", choices=["spherical", "hyperbolic"], default="spherical")
    parser.add_argument("--special", choices=sorted(SPECIALS), default=special_default)
    parser.add_argument("--energy", type=float, default=None)
    parser.add_argument("--eps1", type=float, default=0.5)
    parser.add_argument("--eps2", type=float, default=0.5)
    parser.add_argument("--branch", choices=["plus", "minus"], default="plus")
    parser.add_argument("--phi-sign", choices=["plus", "minus"], default="plus")
    parser.add_argument("--offset", type=float, default=None, help="constant c of the linear family")
    parser.add_argument("--slope", choices=["plus", "minus"], default="plus", help="sign of the linear family")
    parser.add_argument("--s-min", type=float, default=None, help="profile parameter range (s, or t for special families)")
    parser.add_argument("--s-max", type=float, default=None)
    parser.add_argument("--n-s", type=_positive_int, default=32)
    parser.add_argument("--theta-min", type=float, default=None)
    parser.add_argument("--theta-max", type=float, default=None)
    parser.add_argument("--n-theta", type=_positive_int, default=32)
    parser.add_argument("--scale-x1", type=float, default=1.0, help="scale x1 (perturbation control)")
    parser.add_argument("--input", default=None, help="surface report to re-check (overrides profile flags)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randers", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="randomized formula verification sweeps")
    _shared(v, "both")
    v.add_argument("--cases", type=_positive_int, default=200)
    v.add_argument("--codim", type=int, choices=[1, 2], default=None)

    s = sub.add_parser("surface", help="rotational BH-minimal surfaces in H^3")
    ssub = s.add_subparsers(dest="surface_command", required=True)
    for name, special in (("generate", None), ("check", None), ("special", "geodesic-spherical")):
        p = ssub.add_parser(name)
        _shared(p, "bh")
        _surface_flags(p, special)
    return parser


# --- verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    report = run_verification(args.cases, args.seed, args.measure, args.codim, args.tol)
    summary = report["summary"]
    for name, c in summary["classes"].items():
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{status} {name}: worst {c['worst']:.3e} (tol {c['tolerance']:.0e}, {c['count']} cases)",
              file=sys.stderr)
    _emit(report, args.report or args.out)
    return EXIT_OK if summary["pass"] else EXIT_FAIL


# --- surfaces ------------------------------------------------------------------

def surface_parameters(args) -> dict:
    """Normalized surface parameters from flags or from a previous report."""
    if args.input:
        try:
            params = json.loads(Path(args.input).read_text())["parameters"]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"unreadable input {args.input!r}: {exc}") from None
        if args.scale_x1 != 1.0:
            params["scale_x1"] = args.scale_x1
        return params

    if args.special:
        kind, family = SPECIALS[args.special]
        kind = kind or args.type
    else:
        kind, family = args.type, "closed-form"
        if args.energy is None or args.energy == 0:
            raise UsageError("family (c) requires --energy E with E != 0")
    eps = args.eps1 if kind == "spherical" else args.eps2
    if family == "closed-form":
        crit = 1 / (3 * eps ** 2) if eps else np.inf
        default = (args.margin, crit - args.margin)
    elif family == "geodesic":
        default = (0.05, 1.5)
    else:
        default = (0.0, 0.4) if kind == "spherical" else (0.0, 0.04)
    return {
        "type": kind,
        "family": family,
        "energy": args.energy,
        "eps1": args.eps1,
        "eps2": args.eps2,
        "branch": _sign(args.branch),
        "phi_sign": _sign(args.phi_sign),
        "offset": args.offset,
        "slope": _sign(args.slope),
        "s_min": args.s_min if args.s_min is not None else default[0],
        "s_max": args.s_max if args.s_max is not None else default[1],
        "n_s": args.n_s,
        "theta_min": args.theta_min,
        "theta_max": args.theta_max,
        "n_theta": args.n_theta,
        "scale_x1": args.scale_x1,
        "margin": args.margin,
    }


def mesh_from_parameters(params: dict, measure: str = "BH"):
    try:
        field = MixedKillingField(params["eps1"], params["eps2"])
        profile = build_profile(params["type"], params["family"], field, energy=params["energy"],
                                branch=params["branch"], phi_sign=params["phi_sign"],
                                offset=params["offset"], slope_sign=params["slope"])
        theta = None
        if params["theta_min"] is not None or params["theta_max"] is not None:
            lo = params["theta_min"] if params["theta_min"] is not None else 0.0
            hi = params["theta_max"] if params["theta_max"] is not None else 2 * np.pi
            theta = (lo, hi)
        return generate_mesh(profile, field, (params["s_min"], params["s_max"]), params["n_s"],
                             theta_range=theta, n_theta=params["n_theta"], measure=measure,
                             x1_scale=params["scale_x1"], margin=params["margin"])
    except EmptyRegionError:
        raise
    except (ValueError, GeometryError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _write_mesh(mesh, out, fmt):
    written = []
    if not out:
        return written
    base = Path(out)
    for ext, writer in ((".obj", mesh.write_obj), (".csv", mesh.write_csv)):
        if fmt in (ext[1:], "both"):
            path = base if base.suffix == ext else base.with_suffix(ext)
            writer(path)
            written.append(str(path))
    return written


def cmd_surface(args, write_mesh: bool) -> int:
    started = time.perf_counter()
    params = surface_parameters(args)
    measures = ["BH", "HT"] if args.measure == "both" else [args.measure.upper()]
    tol = args.tol if args.tol is not None else 1e-5
    stats, outputs = {}, []
    for measure in measures:
        mesh = mesh_from_parameters(params, measure)
        stats[measure] = mesh.stats()
        if write_mesh and measure == measures[0]:
            outputs = _write_mesh(mesh, args.out, args.format)

    passed = None
    if "BH" in stats:
        worst = stats["BH"]["max"]
        passed = worst is not None and worst <= tol
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": f"surface {args.surface_command}",
        "parameters": params,
        "tolerance": tol,
        "statistics": stats,
        "pass": passed,
        "outputs": outputs,
        "timing": {"wall_seconds": time.perf_counter() - started},
    }
    report_path = args.report
    if report_path is None and write_mesh and args.out:
        report_path = str(Path(args.out).with_suffix(".report.json"))
    _emit(report, report_path)
    for measure, st in stats.items():
        print(f"{measure}: in-Omega {st['in_omega']}/{st['vertices']}, max residual {st['max']}", file=sys.stderr)
    if passed is None:
        return EXIT_OK
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.surface_command == "special" and not args.special:
            raise UsageError("surface special needs --special")
        return cmd_surface(args, write_mesh=args.surface_command != "check")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmptyRegionError as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
