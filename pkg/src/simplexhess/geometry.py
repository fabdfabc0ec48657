"""Direction matrices, sample plans, case labels and sample point sets."""

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError, ZeroRadiusError
from .linalg import as_matrix, is_full_column_rank, is_full_row_rank, pseudoinverse, spectral_norm

DEFAULT_DEDUP_TOL = 1e-12


class DirectionMatrix:
    """
    An ``n x k`` matrix whose columns are displacement directions.

    The radius is the largest Euclidean column norm. Matrices whose radius
    is zero are rejected.
    """

    __slots__ = ("_mat", "_radius")

    def __init__(self, mat):
        mat = as_matrix(mat, "direction matrix").copy()
        radius = float(np.max(np.linalg.norm(mat, axis=0)))
        if radius == 0.0:
            raise ZeroRadiusError("direction matrix has radius 0")
        mat.setflags(write=False)
        self._mat = mat
        self._radius = radius

    @property
    def mat(self):
        return self._mat

    @property
    def radius(self):
        return self._radius

    @property
    def shape(self):
        return self._mat.shape

    @property
    def n(self):
        return self._mat.shape[0]

    @property
    def ncols(self):
        return self._mat.shape[1]

    @property
    def columns(self):
        return self._mat.T

    def scaled(self, alpha):
        return DirectionMatrix(alpha * self._mat)

    def normalized(self):
        return normalize(self)

    def __neg__(self):
        return DirectionMatrix(-self._mat)

    def __eq__(self, other):
        if isinstance(other, DirectionMatrix):
            return self.shape == other.shape and np.array_equal(self._mat, other._mat)
        return NotImplemented

    def __hash__(self):
        return hash((self.shape, self._mat.tobytes()))

    def __repr__(self):
        return f"DirectionMatrix({self._mat.tolist()!r})"


def as_directions(D):
    return D if isinstance(D, DirectionMatrix) else DirectionMatrix(D)


def normalize(D):
    """Divide ``D`` by its radius so the result has radius 1."""
    D = as_directions(D)
    return DirectionMatrix(D.mat / D.radius)


def inverse_norm(D, rtol=None):
    """``||(D_hat^T)^+||``, the spectral norm of the pseudoinverse of the normalized matrix.

    The pseudoinverse of a transpose is the transpose of the pseudoinverse,
    so the same number serves for ``||D_hat^+||``.
    """
    return spectral_norm(pseudoinverse(normalize(D).mat, rtol))


@dataclass(frozen=True, eq=False)
class SamplePlan:
    """
    Everything needed to sample a generalized simplex Hessian.

    Parameters
    ----------
    x0 : array_like, shape (n,)
        Point of interest.
    S : DirectionMatrix or array_like, shape (n, m)
    Ts : sequence of m direction matrices, each (n, k_i)
    shared_T : bool, optional
        Whether all ``T_i`` are the same matrix. Detected when omitted. Pass
        ``False`` to deliberately treat equal matrices as independent.
    """

    x0: np.ndarray
    S: DirectionMatrix
    Ts: tuple
    shared_T: bool = None

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=float).reshape(-1)
        if not np.all(np.isfinite(x0)):
            raise InvalidInputError("x0 has non-finite entries")
        x0.setflags(write=False)
        S = as_directions(self.S)
        Ts = tuple(as_directions(T) for T in self.Ts)
        n = x0.size
        if S.n != n:
            raise InvalidInputError(f"S has {S.n} rows but x0 has dimension {n}")
        if len(Ts) != S.ncols:
            raise InvalidInputError(f"need one T per column of S ({S.ncols}), got {len(Ts)}")
        for i, T in enumerate(Ts):
            if T.n != n:
                raise InvalidInputError(f"T_{i + 1} has {T.n} rows, expected {n}")
        shared = self.shared_T
        if shared is None:
            shared = all(T == Ts[0] for T in Ts[1:])
        elif shared and not all(T == Ts[0] for T in Ts[1:]):
            raise InvalidInputError("shared_T=True but the T matrices differ")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "Ts", Ts)
        object.__setattr__(self, "shared_T", bool(shared))

    @classmethod
    def shared(cls, x0, S, T):
        """Plan with ``T_1 = ... = T_m = T``."""
        S = as_directions(S)
        T = as_directions(T)
        return cls(x0, S, (T,) * S.ncols, shared_T=True)

    @property
    def n(self):
        return self.x0.size

    @property
    def m(self):
        return self.S.ncols

    @property
    def k(self):
        return max(T.ncols for T in self.Ts)

    @property
    def T(self):
        """The common ``T`` of a shared plan."""
        if not self.shared_T:
            raise InvalidInputError("plan does not share a single T")
        return self.Ts[0]

    @property
    def delta_S(self):
        return self.S.radius

    @property
    def delta_T(self):
        return max(T.radius for T in self.Ts)

    @property
    def delta_u(self):
        return max(self.delta_S, self.delta_T)

    @property
    def delta_l(self):
        return min(self.delta_S, min(T.radius for T in self.Ts))

    @property
    def reach(self):
        """Radius of the smallest ball about x0 holding every GSH/GCSH sample point."""
        return max(self.delta_S + T.radius for T in self.Ts)

    def s_inverse_norm(self, rtol=None):
        return inverse_norm(self.S, rtol)

    def t_inverse_norm(self, rtol=None):
        """Largest ``||T_hat_i^+||`` over the T matrices."""
        unique = {T: None for T in self.Ts}
        return max(inverse_norm(T, rtol) for T in unique)

    def negated(self):
        """The plan over ``(-S, -T_1, ..., -T_m)``."""
        return SamplePlan(self.x0, -self.S, tuple(-T for T in self.Ts), shared_T=self.shared_T)

    def swapped(self):
        """The shared plan over ``(T, S)``."""
        return SamplePlan.shared(self.x0, self.T, self.S)

    def stacked(self):
        """The plan over ``[S, -S]`` with ``T_1..T_m, -T_1..-T_m``."""
        A = np.hstack([self.S.mat, -self.S.mat])
        Bs = self.Ts + tuple(-T for T in self.Ts)
        return SamplePlan(self.x0, A, Bs, shared_T=False)

    def with_x0(self, x0):
        return SamplePlan(x0, self.S, self.Ts, shared_T=self.shared_T)

    def scaled(self, alpha):
        """Multiply every direction by ``alpha``."""
        return SamplePlan(self.x0, self.S.scaled(alpha), tuple(T.scaled(alpha) for T in self.Ts),
                          shared_T=self.shared_T)


class Case(str, enum.Enum):
    UNDERDETERMINED = "underdetermined"
    DETERMINED = "determined"
    OVERDETERMINED = "overdetermined"
    NONDETERMINED = "nondetermined"


@dataclass(frozen=True)
class CaseLabel:
    s_case: Case
    t_case: Case


def _matrix_case(A, rtol):
    rows, cols = A.shape
    col_full = is_full_column_rank(A, rtol)
    row_full = is_full_row_rank(A, rtol)
    if rows == cols and col_full:
        return Case.DETERMINED
    if rows != cols and col_full:
        return Case.UNDERDETERMINED
    if rows != cols and row_full:
        return Case.OVERDETERMINED
    return Case.NONDETERMINED


def classify(plan, rtol=None):
    """Label ``S`` and the family ``T_1..T_m`` as under/over/non/determined."""
    s_case = _matrix_case(plan.S.mat, rtol)
    mats = [T.mat for T in {T: None for T in plan.Ts}]
    square = [A.shape[0] == A.shape[1] for A in mats]
    if all(square) and all(is_full_column_rank(A, rtol) for A in mats):
        t_case = Case.DETERMINED
    elif all(is_full_column_rank(A, rtol) for A in mats) and not all(square):
        t_case = Case.UNDERDETERMINED
    elif all(is_full_row_rank(A, rtol) for A in mats) and not all(square):
        t_case = Case.OVERDETERMINED
    else:
        t_case = Case.NONDETERMINED
    return CaseLabel(s_case, t_case)


# Sample points. Every point is built as ``x0 + s + t`` evaluated left to
# right, and all code paths go through ``shift`` so equal points come out
# bit-identical wherever floating point allows.

def shift(base, D):
    """Rows ``base + d^j`` for each column ``d^j`` of ``D``."""
    D = D.mat if isinstance(D, DirectionMatrix) else np.asarray(D, dtype=float)
    return np.asarray(base, dtype=float)[None, :] + D.T


def gsh_raw_points(plan):
    """All GSH sample points in canonical order, duplicates included."""
    x0 = plan.x0
    bases = shift(x0, plan.S)
    chunks = [x0[None, :], bases]
    for i, T in enumerate(plan.Ts):
        chunks.append(shift(x0, T))
        chunks.append(shift(bases[i], T))
    return np.vstack(chunks)


def gcsh_raw_points(plan):
    return np.vstack([gsh_raw_points(plan), gsh_raw_points(plan.negated())])


def _close(p, Q, tol):
    scale = np.maximum(1.0, np.maximum(np.abs(p).max(), np.abs(Q).max(axis=1)))
    return np.abs(Q - p).max(axis=1) <= tol * scale


def dedup(points, tol=DEFAULT_DEDUP_TOL):
    """
    Collapse points equal up to ``tol`` (relative infinity norm).

    Returns the unique points in first-appearance order and, for each input
    row, the index of its representative.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    reps = []
    index = np.empty(len(points), dtype=int)
    exact = {}
    for r, p in enumerate(points):
        key = p.tobytes()
        hit = exact.get(key)
        if hit is None and reps:
            close = np.flatnonzero(_close(p, np.asarray(reps), tol))
            if close.size:
                hit = int(close[0])
        if hit is None:
            hit = len(reps)
            reps.append(p)
        exact.setdefault(key, hit)
        index[r] = hit
    unique = np.array(reps) if reps else np.empty((0, points.shape[1]))
    return unique, index


@dataclass(frozen=True, eq=False)
class PointSet:
    """Pairwise-distinct points, one per row of ``points``."""

    points: np.ndarray
    dedup_tol: float = DEFAULT_DEDUP_TOL
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("point set has non-finite coordinates")
        unique, _ = dedup(pts, self.dedup_tol)
        unique.setflags(write=False)
        object.__setattr__(self, "points", unique)
        object.__setattr__(self, "_index", {p.tobytes(): i for i, p in enumerate(unique)})

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def locate(self, p):
        """Index of the member equal to ``p`` within tolerance, or ``None``."""
        p = np.asarray(p, dtype=float)
        i = self._index.get(p.tobytes())
        if i is not None:
            return i
        close = np.flatnonzero(_close(p, self.points, self.dedup_tol))
        return int(close[0]) if close.size else None

    def __contains__(self, p):
        return self.locate(p) is not None

    def same_set(self, other):
        """True when both sets hold the same points (order ignored)."""
        other = other if isinstance(other, PointSet) else PointSet(other, self.dedup_tol)
        return len(self) == len(other) and all(p in self for p in other)

    def issuperset(self, other):
        return all(p in self for p in other)

    def sorted(self):
        order = np.lexsort(self.points.T[::-1])
        return self.points[order]

    def to_csv(self):
        return "".join(",".join(repr(float(v)) for v in p) + "\n" for p in self.points)

    def to_json(self):
        return json.dumps(self.points.tolist())

    @classmethod
    def from_json(cls, text, dedup_tol=DEFAULT_DEDUP_TOL):
        return cls(np.array(json.loads(text), dtype=float), dedup_tol)

    @classmethod
    def from_csv(cls, text, dedup_tol=DEFAULT_DEDUP_TOL):
        from .linalg import matrix_from_csv

        return cls(matrix_from_csv(text), dedup_tol)


def enumerate_gsh_points(plan, dedup_tol=DEFAULT_DEDUP_TOL):
    """Distinct points touched by a GSH over ``plan``."""
    return PointSet(gsh_raw_points(plan), dedup_tol)


def enumerate_gcsh_points(plan, dedup_tol=DEFAULT_DEDUP_TOL):
    """Distinct points touched by a GCSH: the GSH sets of the plan and its negation."""
    return PointSet(gcsh_raw_points(plan), dedup_tol)
