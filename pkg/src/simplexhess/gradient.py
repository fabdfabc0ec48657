"""Generalized simplex gradients and their error bound."""

from dataclasses import dataclass

import numpy as np

from .exceptions import EvaluationError, InvalidInputError
from .geometry import DEFAULT_DEDUP_TOL, as_directions, inverse_norm, shift
from .linalg import pseudoinverse
from .oracle import SampleEvaluator, as_oracle


@dataclass(frozen=True)
class GradientEstimate:
    vector: np.ndarray
    eval_count: int


def _value(f, x):
    v = float(f(x))
    if not np.isfinite(v):
        raise EvaluationError(x, v)
    return v


def delta_s(f, x0, D, f0=None):
    """
    Forward differences ``f(x0 + d^j) - f(x0)`` over the columns of ``D``.

    ``f0`` may carry an already known ``f(x0)``.
    """
    D = as_directions(D)
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (D.n,):
        raise InvalidInputError(f"x0 has shape {x0.shape}, directions live in R^{D.n}")
    if f0 is None:
        f0 = _value(f, x0)
    return np.array([_value(f, p) for p in shift(x0, D)]) - f0


def gsg_from_differences(D, diffs, rtol=None):
    """``(D^T)^+ diffs``."""
    return pseudoinverse(as_directions(D).mat.T, rtol) @ diffs


def gsg(f, x0, S, rtol=None, dedup_tol=DEFAULT_DEDUP_TOL):
    """
    Generalized simplex gradient of ``f`` at ``x0`` over the columns of ``S``.

    With ``S = diag(h)`` this is the forward-difference gradient.

    Returns
    -------
    GradientEstimate
        ``eval_count`` is the number of distinct points used.
    """
    S = as_directions(S)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    oracle = as_oracle(f, S.n)
    evaluator = SampleEvaluator(oracle, np.vstack([x0[None, :], shift(x0, S)]), dedup_tol)
    g = gsg_from_differences(S, delta_s(evaluator, x0, S), rtol)
    return GradientEstimate(g, evaluator.eval_count)


def project_gradient(g, S, rtol=None):
    """Projection ``(S^T)^+ S^T g`` onto the span of the columns of ``S``."""
    St = as_directions(S).mat.T
    return pseudoinverse(St, rtol) @ (St @ np.asarray(g, dtype=float))


def gsg_error_bound(S, lip_grad, m=None, rtol=None):
    """
    Upper bound on ``||Proj_S(gsg - grad f(x0))||``.

    ``(sqrt(m) / 2) * lip_grad * ||(S_hat^T)^+|| * radius(S)``, where
    ``lip_grad`` is a Lipschitz constant of the gradient on the closed ball
    of radius ``radius(S)`` about ``x0``.
    """
    S = as_directions(S)
    if lip_grad < 0:
        raise InvalidInputError("lip_grad must be nonnegative")
    if m is None:
        m = S.ncols
    return 0.5 * np.sqrt(m) * lip_grad * inverse_norm(S, rtol) * S.radius
