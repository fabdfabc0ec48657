"""Exception types raised across the package."""

import numpy as np


class InvalidInputError(ValueError):
    """Malformed input: wrong shape, non-finite entries, out-of-range index."""


class ZeroRadiusError(InvalidInputError):
    """A direction matrix has no nonzero column, so its radius is 0."""


class EvaluationError(RuntimeError):
    """The objective returned a non-finite value.

    The offending point is kept on ``point`` so callers can report it.
    """

    def __init__(self, point, value=None):
        self.point = np.array(point, dtype=float)
        self.value = value
        super().__init__(f"non-finite function value {value!r} at {self.point.tolist()}")


class BoundNotApplicableError(ValueError):
    """No available error bound covers the sample geometry."""


class CardinalityError(InvalidInputError):
    """A point set has the wrong number of points for quadratic interpolation."""


class SingularSystemError(np.linalg.LinAlgError):
    """The quadratic interpolation system is not uniquely solvable."""
