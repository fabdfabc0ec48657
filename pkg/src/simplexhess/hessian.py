"""
Generalized simplex Hessians (GSH) and their centered variant (GCSH).

Both estimates are built from function values only. For a plan
``(x0, S, T_1..T_m)`` the GSH is ``(S^T)^+ delta2_s`` where row ``i`` of
``delta2_s`` is the difference of the simplex gradients over ``T_i`` at
``x0 + s^i`` and at ``x0``. The GCSH averages the GSH over the plan and over
its negation, and is computed here in one shot from ``delta2_c``.
"""

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import BoundNotApplicableError, InvalidInputError
from .geometry import (
    DEFAULT_DEDUP_TOL,
    Case,
    CaseLabel,
    classify,
    gcsh_raw_points,
    gsh_raw_points,
    shift,
)
from .gradient import _value, delta_s
from .linalg import is_full_column_rank, is_full_row_rank, pseudoinverse
from .oracle import SampleEvaluator, as_oracle

GSH = "GSH"
GCSH = "GCSH"


@dataclass(frozen=True, eq=False)
class HessianEstimate:
    matrix: np.ndarray
    mode: str
    case: CaseLabel
    eval_count: int

    def symmetrized(self):
        M = 0.5 * (self.matrix + self.matrix.T)
        return HessianEstimate(M, self.mode, self.case, self.eval_count)

    def to_dict(self):
        return {
            "mode": self.mode,
            "matrix": self.matrix.tolist(),
            "s_case": self.case.s_case.value,
            "t_case": self.case.t_case.value,
            "eval_count": self.eval_count,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        case = CaseLabel(Case(d["s_case"]), Case(d["t_case"]))
        return cls(np.array(d["matrix"], dtype=float), d["mode"], case, int(d["eval_count"]))


def _row_gram(plan, rtol):
    # T_i^+ for each distinct T, reused across rows of shared plans.
    cache = {}
    for T in plan.Ts:
        if T not in cache:
            cache[T] = pseudoinverse(T.mat, rtol)
    return [cache[T] for T in plan.Ts]


def _delta2_s(f, plan, rtol, f0=None):
    x0 = plan.x0
    if f0 is None:
        f0 = _value(f, x0)
    bases = shift(x0, plan.S)
    pinvs = _row_gram(plan, rtol)
    rows = []
    for i, T in enumerate(plan.Ts):
        fi = _value(f, bases[i])
        # (grad_s f(x0 + s^i; T) - grad_s f(x0; T))^T = (diff)^T T^+
        diff = delta_s(f, bases[i], T, f0=fi) - delta_s(f, x0, T, f0=f0)
        rows.append(diff @ pinvs[i])
    return np.array(rows)


def _delta2_c(f, plan, rtol):
    x0 = plan.x0
    f0 = _value(f, x0)
    plus = shift(x0, plan.S)
    minus = shift(x0, -plan.S)
    pinvs = _row_gram(plan, rtol)
    rows = []
    for i, T in enumerate(plan.Ts):
        negT = -T
        w = (delta_s(f, plus[i], T, f0=_value(f, plus[i]))
             + delta_s(f, minus[i], negT, f0=_value(f, minus[i]))
             - delta_s(f, x0, T, f0=f0)
             - delta_s(f, x0, negT, f0=f0))
        rows.append(0.5 * (w @ pinvs[i]))
    return np.array(rows)


def _evaluator(f, plan, raw, dedup_tol, workers):
    return SampleEvaluator(as_oracle(f, plan.n), raw, dedup_tol, workers)


def delta2_s(f, plan, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL):
    """The ``m x n`` matrix of simplex-gradient differences."""
    return _delta2_s(_evaluator(f, plan, gsh_raw_points(plan), dedup_tol, None), plan, rtol)


def delta2_c(f, plan, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL):
    """
    Centered difference matrix, ``m x n``.

    Entry ``(i, j)`` of the bracket before multiplying by ``T_i^+`` is half of
    ``f(x0+s+t) + f(x0-s-t) - f(x0+s) - f(x0-s) - f(x0+t) - f(x0-t) + 2 f(x0)``.
    """
    return _delta2_c(_evaluator(f, plan, gcsh_raw_points(plan), dedup_tol, None), plan, rtol)


def gsh(f, plan, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL, symmetrize=False, workers=None):
    """
    Generalized simplex Hessian of ``f`` over ``plan``.

    Parameters
    ----------
    f : callable or EvaluationOracle
    plan : SamplePlan
    rtol : float, optional
        Pseudoinverse cutoff.
    dedup_tol : float
        Tolerance under which two sample points count as one.
    symmetrize : bool
        Return ``(M + M^T) / 2`` instead of the raw estimate.
    workers : int, optional
        Evaluate the sample points on a thread pool of this size first.

    Returns
    -------
    HessianEstimate
    """
    ev = _evaluator(f, plan, gsh_raw_points(plan), dedup_tol, workers)
    M = pseudoinverse(plan.S.mat.T, rtol) @ _delta2_s(ev, plan, rtol)
    est = HessianEstimate(M, GSH, classify(plan, rtol), ev.eval_count)
    return est.symmetrized() if symmetrize else est


def gcsh(f, plan, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL, symmetrize=False, workers=None):
    """Generalized centered simplex Hessian, ``(S^T)^+ delta2_c``. See :func:`gsh`."""
    ev = _evaluator(f, plan, gcsh_raw_points(plan), dedup_tol, workers)
    M = pseudoinverse(plan.S.mat.T, rtol) @ _delta2_c(ev, plan, rtol)
    est = HessianEstimate(M, GCSH, classify(plan, rtol), ev.eval_count)
    return est.symmetrized() if symmetrize else est


def project_hessian(H, plan, rtol=None):
    """
    Project ``H`` onto the sample geometry of ``plan``.

    Computes ``sum_i (S^T)^+ e_i e_i^T S^T H T_i T_i^+``; for a shared ``T``
    this is ``(S^T)^+ S^T H T T^+``.
    """
    H = np.asarray(H, dtype=float)
    if H.shape != (plan.n, plan.n):
        raise InvalidInputError(f"H must be {plan.n}x{plan.n}, got {H.shape}")
    St = plan.S.mat.T
    St_pinv = pseudoinverse(St, rtol)
    if plan.shared_T:
        T = plan.T.mat
        return St_pinv @ St @ H @ T @ pseudoinverse(T, rtol)
    SH = St @ H
    rows = np.array([SH[i] @ T.mat @ pinv for i, (T, pinv) in enumerate(zip(plan.Ts, _row_gram(plan, rtol)))])
    return St_pinv @ rows


@dataclass(frozen=True)
class BoundResult:
    """An error bound together with the formula that produced it.

    ``formula`` is ``"shared"`` for the bound valid for a single shared ``T``
    and ``"general"`` for the per-``T_i`` bound; ``general_applicable``
    records whether the rank condition of the general bound holds.
    """

    value: float
    formula: str
    general_applicable: bool

    def __float__(self):
        return float(self.value)


def general_bound_applies(plan, rtol=None):
    """``S`` full column rank, or every ``T_i`` full row rank."""
    return is_full_column_rank(plan.S.mat, rtol) or all(is_full_row_rank(T.mat, rtol) for T in plan.Ts)


def _bound(plan, lip, rtol, general_const, shared_const, power):
    if lip < 0:
        raise InvalidInputError("Lipschitz constant must be nonnegative")
    general = general_bound_applies(plan, rtol)
    m, k = plan.m, plan.k
    ratio = plan.delta_u / plan.delta_l
    factors = lip * plan.s_inverse_norm(rtol) * plan.t_inverse_norm(rtol) * plan.delta_u ** power
    if plan.shared_T:
        return BoundResult(shared_const * np.sqrt(m * k) * ratio * factors, "shared", general)
    if not general:
        raise BoundNotApplicableError(
            "no bound for distinct T_i unless S has full column rank or every T_i has full row rank")
    return BoundResult(general_const * m * np.sqrt(k) * ratio ** 2 * factors, "general", general)


def gsh_error_bound(plan, lip_hess, rtol=None):
    """
    Bound on ``||gsh - Proj H||`` for a Hessian ``lip_hess``-Lipschitz near ``x0``.

    Shared ``T``: ``4 sqrt(mk) L (Du/Dl) ||(S_hat^T)^+|| ||T_hat^+|| Du``.
    Otherwise: ``4 m sqrt(k) L (Du/Dl)^2 ||(S_hat^T)^+|| ||T_hat^+|| Du``,
    which needs ``S`` full column rank or all ``T_i`` full row rank.

    Raises
    ------
    BoundNotApplicableError
    """
    return _bound(plan, lip_hess, rtol, 4.0, 4.0, 1)


def gcsh_error_bound(plan, lip_third, rtol=None):
    """As :func:`gsh_error_bound` with constants 2 and ``Du**2``, for a third derivative ``lip_third``-Lipschitz."""
    return _bound(plan, lip_third, rtol, 2.0, 2.0, 2)
