"""Generalized simplex gradients and Hessians from arbitrary sample sets."""

from . import catalog
from .catalog import TestFunction
from .convergence import (
    ConvergenceReport,
    ConvergenceRow,
    OrderFit,
    convergence_study,
    estimate_order,
    verify_bounds,
)
from .exceptions import (
    BoundNotApplicableError,
    CardinalityError,
    EvaluationError,
    InvalidInputError,
    SingularSystemError,
    ZeroRadiusError,
)
from .geometry import (
    Case,
    CaseLabel,
    DirectionMatrix,
    PointSet,
    SamplePlan,
    classify,
    enumerate_gcsh_points,
    enumerate_gsh_points,
)
from .gradient import GradientEstimate, delta_s, gsg, gsg_error_bound, project_gradient
from .hessian import (
    BoundResult,
    HessianEstimate,
    delta2_c,
    delta2_s,
    gcsh,
    gcsh_error_bound,
    gsh,
    gsh_error_bound,
    project_hessian,
)
from .linalg import numerical_rank, pseudoinverse, spectral_norm
from .oracle import EvaluationOracle
from .poised import (
    QuadraticModel,
    build_U,
    canonical_E,
    find_minimal_poised_representations,
    is_minimal_poised,
    minimal_plan,
    n_quadratic,
    qi_closed_form,
    qi_poised,
    qi_solve,
)

__version__ = "0.1.0"
