"""
Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
``GSH_SVD_RTOL`` and ``GSH_DEDUP_TOL`` override the default tolerances.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import catalog
from .convergence import MODES, convergence_study
from .exceptions import BoundNotApplicableError, EvaluationError, InvalidInputError
from .geometry import DEFAULT_DEDUP_TOL, SamplePlan, enumerate_gsh_points
from .hessian import gcsh, gsh
from .linalg import is_full_column_rank, read_matrix
from .poised import build_U, canonical_E, n_quadratic, qi_poised
from .verification import SUITES, run_suite

PRESETS = ("identity", "canonical", "U")


class UsageError(Exception):
    pass


def _env_float(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{name}={raw!r} is not a number") from None


def _vector(text, n=None):
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None
    if n is not None and v.size != n:
        raise UsageError(f"expected {n} components, got {v.size}")
    return v


def parse_radii(spec):
    """``start:stop:count`` to a geometric grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError("radii must look like start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"cannot parse radii {spec!r}") from None
    if start <= 0 or stop <= 0 or count < 2 or stop >= start:
        raise UsageError("radii need start > stop > 0 and count >= 2")
    return np.geomspace(start, stop, count)


def _tolerances(args):
    rtol = args.svd_rtol if args.svd_rtol is not None else _env_float("GSH_SVD_RTOL", None)
    dedup = args.dedup_tol if args.dedup_tol is not None else _env_float("GSH_DEDUP_TOL", DEFAULT_DEDUP_TOL)
    return rtol, dedup


def build_plan(args, n, x0, h):
    """Sample plan from ``--S/--T`` files or a named preset, scaled by ``h``."""
    S = read_matrix(args.S) if args.S else None
    T = read_matrix(args.T) if args.T else None
    if S is not None and S.shape[0] != n:
        raise UsageError(f"S has {S.shape[0]} rows but the function lives in R^{n}")
    if T is not None and T.shape[0] != n:
        raise UsageError(f"T has {T.shape[0]} rows but the function lives in R^{n}")
    preset = args.preset
    if preset == "identity":
        S = np.eye(n) if S is None else S
        T = S if T is None else T
    elif preset == "canonical":
        if S is not None:
            raise UsageError("the canonical preset fixes S = Id; use --preset U with an S file")
        S, T = np.eye(n), canonical_E(n, args.ell).mat
    elif preset == "U":
        S = np.eye(n) if S is None else S
        T = build_U(S, args.ell).mat
    elif S is None or T is None:
        raise UsageError("give --preset or both --S and --T")
    return SamplePlan.shared(x0, h * S, h * T)


def cmd_compute(args, out):
    rtol, dedup = _tolerances(args)
    func = catalog.get(args.func)
    n = func.dimension
    x0 = _vector(args.x0, n) if args.x0 else np.zeros(n)
    plan = build_plan(args, n, x0, args.h)
    fn = gsh if args.mode == "gsh" else gcsh
    est = fn(func.value, plan, rtol=rtol, dedup_tol=dedup, symmetrize=args.symmetrize)
    out.write(est.to_json() + "\n")
    return 0


def cmd_converge(args, out):
    rtol, dedup = _tolerances(args)
    func = catalog.get(args.func)
    n = func.dimension
    x0 = _vector(args.x0, n) if args.x0 else np.zeros(n)
    radii = parse_radii(args.radii)
    mode = args.mode.upper()
    if mode == "GSG":
        template = read_matrix(args.S) if args.S else np.eye(n)
    else:
        template = build_plan(args, n, np.zeros(n), 1.0)
    report = convergence_study(func, x0, template, radii, mode, rtol=rtol, dedup_tol=dedup)
    out.write(report.to_csv())
    sidecar = json.dumps({k: v for k, v in report.to_dict().items() if k != "rows"})
    if args.sidecar:
        with open(args.sidecar, "w") as fh:
            fh.write(sidecar + "\n")
    else:
        sys.stderr.write(sidecar + "\n")
    return 0


def cmd_minimal_set(args, out):
    _, dedup = _tolerances(args)
    n = args.dim
    S = read_matrix(args.S) if args.S else np.eye(n)
    if S.shape != (n, n):
        raise UsageError(f"S must be {n}x{n}, got {S.shape[0]}x{S.shape[1]}")
    if not 0 <= args.ell <= n:
        raise UsageError(f"ell must lie in 0..{n}")
    if not is_full_column_rank(S):
        raise UsageError("S is rank deficient")
    x0 = _vector(args.x0, n) if args.x0 else np.zeros(n)
    pts = enumerate_gsh_points(SamplePlan.shared(x0, S, build_U(S, args.ell)), dedup)
    report = qi_poised(pts)
    if args.format == "json":
        out.write(json.dumps({"points": pts.points.tolist(), "count": len(pts),
                              "poised": report.poised, "system_rank": report.system_rank}) + "\n")
    else:
        out.write(pts.to_csv())
        out.write(f"# count={len(pts)} poised={str(report.poised).lower()}\n")
    return 0 if len(pts) == n_quadratic(n) and report.poised else 1


def cmd_verify(args, out):
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    results = run_suite(args.suite, seed=args.seed)
    summary = {
        "passed": all(r.passed for r in results),
        "checked": sum(r.checked for r in results),
        "suites": [r.to_dict() for r in results],
    }
    out.write(json.dumps(summary, indent=2) + "\n")
    return 0 if summary["passed"] else 1


def _add_tolerances(p):
    p.add_argument("--svd-rtol", type=float, default=None, help="pseudoinverse cutoff (relative)")
    p.add_argument("--dedup-tol", type=float, default=None, help="tolerance for merging sample points")


def _add_geometry(p):
    p.add_argument("--preset", choices=PRESETS, default=None,
                   help="identity: S = T = Id; canonical: S = Id, T = E_ell; U: T = U_ell of S")
    p.add_argument("--S", help="CSV file with the direction matrix S")
    p.add_argument("--T", help="CSV file with the shared direction matrix T")
    p.add_argument("--ell", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="simplexhess", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="estimate a Hessian, print JSON")
    p.add_argument("--func", required=True)
    p.add_argument("--x0")
    p.add_argument("--h", type=float, default=0.1, help="scale applied to S and T")
    p.add_argument("--mode", choices=("gsh", "gcsh"), default="gsh")
    p.add_argument("--symmetrize", action="store_true")
    _add_geometry(p)
    _add_tolerances(p)
    p.set_defaults(run=cmd_compute)

    p = sub.add_parser("converge", help="convergence study, CSV on stdout")
    p.add_argument("--func", required=True)
    p.add_argument("--x0")
    p.add_argument("--mode", choices=[m.lower() for m in MODES], default="gsh")
    p.add_argument("--radii", default="1e-1:1e-3:8", help="start:stop:count, geometric")
    p.add_argument("--sidecar", help="write fitted order JSON here instead of stderr")
    _add_geometry(p)
    _add_tolerances(p)
    p.set_defaults(run=cmd_converge, preset="identity")

    p = sub.add_parser("minimal-set", help="points of the minimal poised set M(x0; S, U_ell)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--S")
    p.add_argument("--x0")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_tolerances(p)
    p.set_defaults(run=cmd_minimal_set)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.run(args, out)
    except (UsageError, InvalidInputError, BoundNotApplicableError, EvaluationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
