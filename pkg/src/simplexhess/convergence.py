"""Convergence studies: error against sampling radius, fitted order, bound checks."""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BoundNotApplicableError, InvalidInputError
from .geometry import (
    DEFAULT_DEDUP_TOL,
    SamplePlan,
    as_directions,
    enumerate_gcsh_points,
    enumerate_gsh_points,
    shift,
)
from .gradient import gsg, gsg_error_bound, project_gradient
from .hessian import gcsh, gcsh_error_bound, gsh, gsh_error_bound, project_hessian
from .linalg import EPS, spectral_norm
from .oracle import EvaluationOracle

GSG = "GSG"
GSH = "GSH"
GCSH = "GCSH"
MODES = (GSG, GSH, GCSH)

FLOOR_FACTOR = 1e3
BOUND_RTOL = 1e-8


def default_radii(start=1e-1, stop=1e-3, count=8):
    return np.geomspace(start, stop, count)


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    error: float
    bound: float = None
    floor: float = 0.0


@dataclass(frozen=True)
class OrderFit:
    order: float = None
    constant: float = None
    exact: bool = False


@dataclass
class ConvergenceReport:
    mode: str
    rows: list
    fitted_order: float = None
    fitted_constant: float = None
    exact: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        deltas = [r.delta for r in self.rows]
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise InvalidInputError("radii must be strictly decreasing")
        if any(r.error < 0 or (r.bound is not None and r.bound < 0) for r in self.rows):
            raise InvalidInputError("errors and bounds must be nonnegative")

    @property
    def has_bounds(self):
        return all(r.bound is not None for r in self.rows)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delta", "error", "bound"])
        for r in self.rows:
            w.writerow([repr(r.delta), repr(r.error), "" if r.bound is None else repr(r.bound)])
        return buf.getvalue()

    def to_dict(self):
        return {
            "mode": self.mode,
            "fitted_order": self.fitted_order,
            "fitted_constant": self.fitted_constant,
            "exact": self.exact,
            "rows": [{"delta": r.delta, "error": r.error, "bound": r.bound, "floor": r.floor}
                     for r in self.rows],
            **self.meta,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_csv(cls, text, mode):
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            bound = rec["bound"].strip()
            rows.append(ConvergenceRow(float(rec["delta"]), float(rec["error"]),
                                       float(bound) if bound else None))
        return cls(mode, rows)


def estimate_order(report, min_rows=3):
    """
    Least-squares slope of ``log(error)`` against ``log(delta)``.

    Rows at or below their round-off floor are left out. When every row is
    there the estimator is exact for the function and ``OrderFit.exact`` is
    set instead of a slope.
    """
    rows = report.rows if isinstance(report, ConvergenceReport) else report
    usable = [r for r in rows if r.error > r.floor]
    if not usable:
        return OrderFit(exact=True)
    if len(usable) < min_rows:
        raise InvalidInputError(f"need {min_rows} rows above the round-off floor, have {len(usable)}")
    x = np.log([r.delta for r in usable])
    y = np.log([r.error for r in usable])
    slope, intercept = np.polyfit(x, y, 1)
    return OrderFit(float(slope), float(np.exp(intercept)), False)


def verify_bounds(report, rtol=BOUND_RTOL):
    """True iff ``error <= bound * (1 + rtol) + floor`` on every row.

    ``floor`` is the row's round-off allowance; it only matters where the
    bound is 0 (functions the estimator reproduces exactly).
    """
    rows = report.rows if isinstance(report, ConvergenceReport) else report
    if any(r.bound is None for r in rows):
        raise InvalidInputError("report has rows without a bound")
    return all(r.error <= r.bound * (1 + rtol) + r.floor for r in rows)


def _scale_plan(template, x0, delta):
    if isinstance(template, SamplePlan):
        return template.with_x0(x0).scaled(delta / template.delta_u)
    S = as_directions(template)
    return S.scaled(delta / S.radius)


def _round_off_floor(oracle, points, ref_norm, delta, power):
    fmax = max(abs(oracle(p)) for p in points)
    return FLOOR_FACTOR * EPS * max(1.0, ref_norm, fmax / delta ** power)


def study_row(func, x0, geometry, mode, oracle=None, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL):
    """
    Error of one estimate against its projected reference, with its bound.

    ``geometry`` is a direction matrix for ``GSG`` and a SamplePlan
    otherwise. The bound is ``None`` when no known bound covers the geometry.
    """
    x0 = np.asarray(x0, dtype=float)
    oracle = oracle or EvaluationOracle(func.value, func.dimension)
    if mode == GSG:
        S = as_directions(geometry)
        est = gsg(oracle, x0, S, rtol, dedup_tol).vector
        ref = project_gradient(func.gradient(x0), S, rtol)
        error = float(np.linalg.norm(est - ref))
        bound = gsg_error_bound(S, func.lip_grad(x0, S.radius), rtol=rtol)
        points = np.vstack([x0[None, :], shift(x0, S)])
        floor = _round_off_floor(oracle, points, np.linalg.norm(ref), S.radius, 1)
        return ConvergenceRow(S.radius, error, float(bound), floor)
    plan = geometry
    if mode == GSH:
        est = gsh(oracle, plan, rtol, dedup_tol).matrix
        points = enumerate_gsh_points(plan, dedup_tol)
        bound_fn, lip = gsh_error_bound, func.lip_hess
    elif mode == GCSH:
        est = gcsh(oracle, plan, rtol, dedup_tol).matrix
        points = enumerate_gcsh_points(plan, dedup_tol)
        bound_fn, lip = gcsh_error_bound, func.lip_third
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    ref = project_hessian(func.hessian(x0), plan, rtol)
    error = spectral_norm(est - ref)
    try:
        bound = float(bound_fn(plan, lip(x0, plan.reach), rtol))
    except BoundNotApplicableError:
        bound = None
    floor = _round_off_floor(oracle, points, spectral_norm(ref), plan.delta_l, 2)
    return ConvergenceRow(plan.delta_u, error, bound, floor)


def convergence_study(func, x0, template, radii=None, mode=GSH, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL):
    """
    Run an estimator over shrinking copies of ``template``.

    Parameters
    ----------
    func : TestFunction
    x0 : array_like
    template : SamplePlan or direction matrix
        Geometry to shrink. Each radius ``delta`` rescales it so its largest
        radius equals ``delta``; relative radii are kept. ``GSG`` takes a
        direction matrix, the Hessian modes a plan (its ``x0`` is ignored).
    radii : sequence of float, optional
        Strictly decreasing. Defaults to 8 points from 1e-1 to 1e-3.
    mode : {"GSG", "GSH", "GCSH"}

    Returns
    -------
    ConvergenceReport
    """
    mode = mode.upper()
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}")
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise InvalidInputError("radii must be positive")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    oracle = EvaluationOracle(func.value, func.dimension)
    rows = [study_row(func, x0, _scale_plan(template, x0, d), mode, oracle, rtol, dedup_tol)
            for d in radii]
    report = ConvergenceReport(mode, rows, meta={"function": func.name, "x0": x0.tolist()})
    fit = estimate_order(report)
    report.fitted_order, report.fitted_constant, report.exact = fit.order, fit.constant, fit.exact
    return report
