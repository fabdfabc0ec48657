"""
Minimal poised sample sets for the GSH and quadratic interpolation.

For square full-rank ``S`` and ``T = build_U(S, ell)`` the GSH touches
exactly ``(n+1)(n+2)/2`` distinct points, the number a quadratic in ``R^n``
needs. Those points are poised for quadratic interpolation, and the
interpolating quadratic has the GSH as its Hessian; ``qi_closed_form``
produces that quadratic directly from the sample values.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .exceptions import CardinalityError, InvalidInputError, SingularSystemError
from .geometry import DEFAULT_DEDUP_TOL, DirectionMatrix, PointSet, SamplePlan, as_directions, gsh_raw_points
from .linalg import is_full_column_rank, numerical_rank
from .oracle import SampleEvaluator, as_oracle

POISED_RTOL = 1e-10


def n_quadratic(n):
    """Number of coefficients of a quadratic on ``R^n``."""
    return (n + 1) * (n + 2) // 2


@dataclass(frozen=True, eq=False)
class QuadraticModel:
    """``Q(x) = alpha0 + alpha^T x + x^T H x / 2`` with symmetric ``H``."""

    alpha0: float
    alpha: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        H = np.asarray(self.H, dtype=float)
        if H.shape != (alpha.size, alpha.size):
            raise InvalidInputError("H and alpha dimensions disagree")
        H = 0.5 * (H + H.T)
        if not (np.isfinite(self.alpha0) and np.all(np.isfinite(alpha)) and np.all(np.isfinite(H))):
            raise InvalidInputError("model coefficients must be finite")
        object.__setattr__(self, "alpha0", float(self.alpha0))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "H", H)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.alpha0 + x @ self.alpha + 0.5 * np.einsum("...i,ij,...j->...", x, self.H, x)

    def to_json(self):
        return json.dumps({"alpha0": self.alpha0, "alpha": self.alpha.tolist(), "H": self.H.tolist()})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["alpha0"], d["alpha"], d["H"])


def build_U(S, ell):
    """
    Direction matrix ``U_ell`` paired with ``S`` in a minimal poised set.

    ``U_0 = S``. For ``ell >= 1`` column ``j != ell`` is ``s^j - s^ell`` and
    column ``ell`` is ``-s^ell`` (``ell`` is 1-based).
    """
    S = as_directions(S)
    n, m = S.shape
    if n != m:
        raise InvalidInputError(f"S must be square, got {S.shape}")
    if not 0 <= ell <= n:
        raise InvalidInputError(f"ell must lie in 0..{n}, got {ell}")
    if ell == 0:
        return S
    cols = S.mat.copy()
    pivot = S.mat[:, ell - 1]
    cols -= pivot[:, None]
    cols[:, ell - 1] = -pivot
    return DirectionMatrix(cols)


def canonical_E(n, ell):
    """``build_U(Id_n, ell)``."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    return build_U(np.eye(n), ell)


def minimal_plan(x0, S, ell):
    """Shared plan ``(x0, S, U_ell)``."""
    S = as_directions(S)
    return SamplePlan.shared(x0, S, build_U(S, ell))


def is_minimal_poised(x0, S, T, dedup_tol=DEFAULT_DEDUP_TOL, rtol=None):
    """
    Whether ``(S, T)`` gives a minimal poised set for the GSH at ``x0``.

    Returns ``(flag, count)`` where ``count`` is the number of distinct GSH
    sample points.
    """
    S = as_directions(S)
    T = as_directions(T)
    if S.shape[0] != S.shape[1] or T.shape[0] != T.shape[1]:
        raise InvalidInputError("S and T must be square")
    count = len(PointSet(gsh_raw_points(SamplePlan.shared(x0, S, T)), dedup_tol))
    full = is_full_column_rank(S.mat, rtol) and is_full_column_rank(T.mat, rtol)
    return bool(full and count == n_quadratic(S.n)), count


def interpolation_matrix(points):
    """
    Rows ``[1, y, quadratic monomials]`` for each point.

    The quadratic block runs over ``i <= j`` in row-major order, using
    ``y_i**2 / 2`` on the diagonal and ``y_i * y_j`` off it, so the unknowns
    are ``(alpha0, alpha, H_ij for i <= j)``.
    """
    Y = np.atleast_2d(np.asarray(points, dtype=float))
    n = Y.shape[1]
    iu, ju = np.triu_indices(n)
    quad = Y[:, iu] * Y[:, ju]
    quad[:, iu == ju] *= 0.5
    return np.hstack([np.ones((len(Y), 1)), Y, quad])


@dataclass(frozen=True)
class PoisednessReport:
    poised: bool
    system_rank: int
    condition: float


def _points_array(points):
    if isinstance(points, PointSet):
        return points.points
    return np.atleast_2d(np.asarray(points, dtype=float))


def qi_poised(points, rtol=POISED_RTOL):
    """Rank and conditioning of the quadratic interpolation system on ``points``."""
    Y = _points_array(points)
    p = n_quadratic(Y.shape[1])
    if len(Y) != p:
        raise CardinalityError(f"need {p} points in R^{Y.shape[1]}, got {len(Y)}")
    M = interpolation_matrix(Y)
    sigma = np.linalg.svd(M, compute_uv=False)
    rank = numerical_rank(M, rtol)
    condition = float(sigma[0] / sigma[-1]) if sigma[-1] > 0 else float("inf")
    return PoisednessReport(rank == p, rank, condition)


def _unpack(coef, n):
    alpha0 = coef[0]
    alpha = coef[1:n + 1]
    H = np.zeros((n, n))
    iu, ju = np.triu_indices(n)
    H[iu, ju] = coef[n + 1:]
    H[ju, iu] = coef[n + 1:]
    return QuadraticModel(alpha0, alpha, H)


def qi_solve(points, values, rtol=POISED_RTOL):
    """The unique quadratic through ``(points, values)``.

    Raises
    ------
    SingularSystemError
        If the points are not poised for quadratic interpolation.
    """
    Y = _points_array(points)
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != len(Y):
        raise InvalidInputError("one value per point is required")
    if not qi_poised(Y, rtol).poised:
        raise SingularSystemError("points are not poised for quadratic interpolation")
    coef = np.linalg.solve(interpolation_matrix(Y), values)
    return _unpack(coef, Y.shape[1])


def qi_closed_form(f, x0, S, ell, dedup_tol=DEFAULT_DEDUP_TOL):
    """
    Quadratic interpolant on the minimal poised set ``M(x0; S, U_ell)``.

    Builds ``H_hat = S^T H S`` entry by entry from at most four function
    values each, then maps back with ``S^{-1}``. Only the points of the
    minimal poised set are evaluated.

    Raises
    ------
    InvalidInputError
        If ``S`` is not square and invertible.
    """
    S = as_directions(S)
    n = S.n
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if S.shape != (n, n) or not is_full_column_rank(S.mat):
        raise InvalidInputError("S must be square and full rank")
    plan = minimal_plan(x0, S, ell)
    F = SampleEvaluator(as_oracle(f, n), gsh_raw_points(plan), dedup_tol)
    s = S.mat.T
    f0 = F(x0)
    fs = np.array([F(x0 + s[i]) for i in range(n)])
    Hh = np.empty((n, n))
    if ell == 0:
        for i in range(n):
            Hh[i, i] = F(x0 + 2 * s[i]) - 2 * fs[i] + f0
            for j in range(i + 1, n):
                Hh[i, j] = Hh[j, i] = F(x0 + s[i] + s[j]) - fs[i] - fs[j] + f0
    else:
        p = ell - 1
        f_minus = F(x0 - s[p])
        others = [i for i in range(n) if i != p]
        f_shift = {i: F(x0 + (s[i] - s[p])) for i in others}
        Hh[p, p] = fs[p] + f_minus - 2 * f0
        for i in others:
            Hh[i, p] = Hh[p, i] = -f_shift[i] + fs[i] + f_minus - f0
            Hh[i, i] = F(x0 + 2 * s[i] - s[p]) - 2 * f_shift[i] + f_minus
        for a, i in enumerate(others):
            for j in others[a + 1:]:
                Hh[i, j] = Hh[j, i] = F(x0 + s[i] + s[j] - s[p]) - f_shift[i] - f_shift[j] + f_minus
    S_inv = np.linalg.inv(S.mat)
    H = S_inv.T @ Hh @ S_inv
    alpha_bar = fs - f0 - 0.5 * np.diag(Hh) - x0 @ H @ S.mat
    alpha = S_inv.T @ alpha_bar
    alpha0 = f0 - alpha @ x0 - 0.5 * x0 @ H @ x0
    return QuadraticModel(alpha0, alpha, H)


def find_minimal_poised_representations(points, x0, dedup_tol=DEFAULT_DEDUP_TOL, rtol=None):
    """
    Brute-force every ``(S, T)`` whose GSH sample set at ``x0`` is ``points``.

    Columns of ``S`` are drawn, in order, from ``points - x0``; columns of
    ``T`` from the pairwise differences of ``points``. Only ``n <= 2`` is
    supported. Returns a list of ``(S, T)`` array pairs, empty when the set
    is not a minimal poised set for the GSH at ``x0``.
    """
    pts = PointSet(_points_array(points), dedup_tol)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n = pts.dim
    if n > 2:
        raise InvalidInputError("brute-force search is limited to n <= 2")
    if len(pts) != n_quadratic(n) or x0 not in pts:
        return []
    s_cands = [p - x0 for p in pts.points if np.any(p != x0)]
    t_cands = PointSet([p - q for p in pts.points for q in pts.points if np.any(p != q)], dedup_tol).points
    found = []
    for s_cols in itertools.permutations(s_cands, n):
        S = np.column_stack(s_cols)
        if not is_full_column_rank(S, rtol):
            continue
        for t_cols in itertools.permutations(t_cands, n):
            T = np.column_stack(t_cols)
            if not is_full_column_rank(T, rtol):
                continue
            cand = PointSet(gsh_raw_points(SamplePlan.shared(x0, S, T)), dedup_tol)
            if cand.same_set(pts):
                found.append((S, T))
    return found
