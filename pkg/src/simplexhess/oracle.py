"""Memoizing, counting wrapper around a black-box objective."""

import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import EvaluationError, InvalidInputError
from .geometry import DEFAULT_DEDUP_TOL, PointSet


class EvaluationOracle:
    """
    Cache ``func`` values keyed on the exact bit pattern of the point.

    ``call_count`` counts every request, ``distinct_count`` only the points
    actually passed to ``func``. The cache is safe to use from several
    threads: a key is inserted once and always maps to the same value.

    Parameters
    ----------
    func : callable
        Maps an ``(n,)`` float array to a real number.
    dimension : int, optional
        When given, points of another length are rejected.
    """

    def __init__(self, func, dimension=None):
        self.func = func
        self.dimension = dimension
        self.memo = {}
        self.call_count = 0
        self._lock = threading.Lock()
        self._key_locks = {}

    @property
    def distinct_count(self):
        return len(self.memo)

    def _check(self, x):
        x = np.array(x, dtype=float).reshape(-1)
        if self.dimension is not None and x.size != self.dimension:
            raise InvalidInputError(f"expected a point of dimension {self.dimension}, got {x.size}")
        return x

    def __call__(self, x):
        x = self._check(x)
        key = x.tobytes()
        with self._lock:
            self.call_count += 1
            if key in self.memo:
                return self.memo[key]
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            with self._lock:
                if key in self.memo:
                    return self.memo[key]
            value = float(self.func(x.copy()))
            if not np.isfinite(value):
                raise EvaluationError(x, value)
            with self._lock:
                self.memo.setdefault(key, value)
                self._key_locks.pop(key, None)
                return self.memo[key]

    def evaluate_many(self, points, workers=None):
        """Evaluate each row of ``points``; ``workers > 1`` uses a thread pool."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if workers is None or workers <= 1:
            return np.array([self(p) for p in points])
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.array(list(pool.map(self, points)))

    def reset_counts(self):
        with self._lock:
            self.call_count = 0


def as_oracle(f, dimension=None):
    return f if isinstance(f, EvaluationOracle) else EvaluationOracle(f, dimension)


class SampleEvaluator:
    """
    Evaluate ``oracle`` on a fixed, deduplicated sample set.

    Any requested point is first mapped to its representative in the set, so
    points that differ only by summation-order rounding share one
    evaluation. ``eval_count`` is the number of distinct representatives
    requested so far.
    """

    def __init__(self, oracle, raw_points, dedup_tol=DEFAULT_DEDUP_TOL, workers=None):
        self.oracle = oracle
        self.points = PointSet(raw_points, dedup_tol)
        self._used = set()
        self._lock = threading.Lock()
        if workers is not None and workers > 1:
            values = oracle.evaluate_many(self.points.points, workers)
            self._values = dict(enumerate(values))
        else:
            self._values = {}

    def __call__(self, x):
        i = self.points.locate(x)
        if i is None:
            raise InvalidInputError(f"point {np.asarray(x).tolist()} is outside the sample set")
        with self._lock:
            self._used.add(i)
            value = self._values.get(i)
        if value is None:
            value = self.oracle(self.points.points[i])
            with self._lock:
                self._values[i] = value
        return value

    @property
    def eval_count(self):
        return len(self._used)
