"""Randomized invariant suites behind ``simplexhess verify``."""

from dataclasses import dataclass, field

import numpy as np

from . import catalog as _catalog
from .convergence import GCSH, GSG, GSH, study_row, verify_bounds
from .geometry import SamplePlan, enumerate_gsh_points
from .gradient import gsg, project_gradient
from .hessian import gcsh, gsh, project_hessian
from .linalg import frobenius_norm, penrose_residuals, pseudoinverse, spectral_norm
from .oracle import EvaluationOracle
from .poised import (
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

SUITES = ("linalg", "hessian", "poised", "bounds")
IDENTITY_TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def check(self, ok, label, **detail):
        self.checked += 1
        if not ok:
            self.failures.append({"check": label, **{k: _plain(v) for k, v in detail.items()}})

    def to_dict(self):
        return {"suite": self.name, "checked": self.checked, "passed": self.passed, "failures": self.failures}


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    return v


def _rel(A, B):
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    return float(np.abs(A - B).max() / max(1.0, np.abs(B).max()))


def random_rank_deficient(rng, max_size=8):
    r, c = rng.integers(1, max_size + 1, size=2)
    k = rng.integers(1, min(r, c) + 1)
    return rng.standard_normal((r, k)) @ rng.standard_normal((k, c))


def random_well_conditioned(rng, n, cols=None, max_cond=20.0):
    cols = n if cols is None else cols
    while True:
        A = rng.standard_normal((n, cols))
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] > 0 and s[0] / s[-1] < max_cond:
            return A


def random_directions(rng, n, cols, lo=0.05, hi=0.2):
    """Random directions with lengths uniform in ``[lo, hi]``.

    Keeps columns away from zero length, where the round-off of a second
    difference (about eps |grad f| / (|s| |t|)) would swamp a 1e-12 check.
    """
    D = rng.standard_normal((n, cols))
    return D / np.linalg.norm(D, axis=0) * rng.uniform(lo, hi, cols)


def smooth_function(rng, n):
    """A random non-polynomial test function."""
    a = rng.normal(scale=0.7, size=n)
    B = rng.normal(size=(n, n))
    return lambda x: float(np.exp(a @ x) + np.sin(x @ B @ x) + np.sum(x ** 3))


def linalg_suite(seed=0, count=200):
    res = SuiteResult("linalg")
    rng = np.random.default_rng(seed)
    for t in range(count):
        A = random_rank_deficient(rng) if t % 2 else rng.standard_normal(rng.integers(1, 9, size=2))
        P = pseudoinverse(A)
        nA, nP = spectral_norm(A), spectral_norm(P)
        r1, r2, r3, r4 = penrose_residuals(A, P)
        tol = 1e-10 * max(1.0, nA)
        res.check(max(r1, r3, r4) <= tol, "penrose", trial=t, residuals=[r1, r3, r4])
        res.check(r2 <= 1e-10 * max(1.0, nA, nP), "penrose-ii", trial=t, residual=r2)
        res.check(np.abs(pseudoinverse(P) - A).max() <= 1e-9 * max(1.0, nA), "double-pinv", trial=t)
        res.check(nA <= frobenius_norm(A) * (1 + 1e-12), "norm-order", trial=t)
    return res


def hessian_suite(seed=0, trials=20):
    res = SuiteResult("hessian")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n = int(rng.integers(2, 6))
        x0 = rng.uniform(-0.5, 0.5, n)
        h = 0.05

        B = rng.standard_normal((n, n))
        A = B + B.T
        quad = lambda x, A=A: 0.5 * x @ A @ x
        H = gsh(quad, SamplePlan.shared(x0, h * np.eye(n), h * np.eye(n))).matrix
        res.check(_rel(H, A) <= 1e-8, "quadratic-exact", trial=t, rel=_rel(H, A))

        f = EvaluationOracle(smooth_function(rng, n), n)
        S = random_directions(rng, n, int(rng.integers(1, n + 2)))
        Ts = [random_directions(rng, n, int(rng.integers(1, n + 2))) for _ in range(S.shape[1])]
        plan = SamplePlan(x0, S, Ts)
        C = gcsh(f, plan).matrix
        avg = 0.5 * (gsh(f, plan).matrix + gsh(f, plan.negated()).matrix)
        stacked = gsh(f, plan.stacked()).matrix
        res.check(_rel(C, avg) <= IDENTITY_TOL, "gcsh-average", trial=t, rel=_rel(C, avg))
        res.check(_rel(C, stacked) <= IDENTITY_TOL, "gcsh-stacked", trial=t, rel=_rel(C, stacked))

        # Projection idempotence: S full column rank, or all T_i full row rank.
        tall = SamplePlan(x0, 0.1 * random_well_conditioned(rng, n, max(1, n - 1)),
                          [random_directions(rng, n, int(rng.integers(1, n + 2))) for _ in range(max(1, n - 1))])
        S_any = random_directions(rng, n, int(rng.integers(1, n + 3)))
        wide = SamplePlan(x0, S_any, [0.1 * random_well_conditioned(rng, n, n + int(rng.integers(0, 2)))
                                      for _ in range(S_any.shape[1])])
        shared = SamplePlan.shared(x0, random_directions(rng, n, int(rng.integers(1, n + 2))),
                                   random_directions(rng, n, int(rng.integers(1, n + 2))))
        for label, p in (("S-full-column", tall), ("T-full-row", wide), ("shared", shared)):
            for est in (gsh(f, p).matrix, gcsh(f, p).matrix):
                proj = project_hessian(est, p)
                res.check(_rel(proj, est) <= IDENTITY_TOL, f"idempotent-{label}", trial=t, rel=_rel(proj, est))

        Hs = gsh(f, shared).matrix
        Hc = gcsh(f, shared).matrix
        res.check(_rel(Hs.T, gsh(f, shared.swapped()).matrix) <= IDENTITY_TOL, "transpose-gsh", trial=t)
        res.check(_rel(Hc.T, gcsh(f, shared.swapped()).matrix) <= IDENTITY_TOL, "transpose-gcsh", trial=t)

        hs = rng.uniform(0.01, 0.1, n)
        D = np.diag(hs)
        Hfd = gsh(f, SamplePlan.shared(x0, D, D)).matrix
        fd = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                xi = x0 + D[:, i]
                fd[i, j] = (f(xi + D[:, j]) - f(xi) - f(x0 + D[:, j]) + f(x0)) / (hs[i] * hs[j])
        res.check(_rel(Hfd, fd) <= IDENTITY_TOL, "forward-difference", trial=t, rel=_rel(Hfd, fd))

        Sg = random_directions(rng, n, int(rng.integers(1, n + 2)))
        g = gsg(f, x0, Sg).vector
        res.check(_rel(project_gradient(g, Sg), g) <= IDENTITY_TOL, "gsg-fixed-point", trial=t)

        M = rng.standard_normal((n, int(rng.integers(1, n + 2))))
        lhs = pseudoinverse(np.hstack([M, -M]))
        rhs = 0.5 * np.vstack([pseudoinverse(M), -pseudoinverse(M)])
        res.check(_rel(lhs, rhs) <= IDENTITY_TOL, "stacked-pinv", trial=t)
    return res


def poised_suite(seed=0):
    res = SuiteResult("poised")
    rng = np.random.default_rng(seed)
    for n in range(1, 7):
        for ell in range(n + 1):
            S = random_well_conditioned(rng, n)
            x0 = rng.uniform(-1, 1, n)
            ok, count = is_minimal_poised(x0, S, build_U(S, ell))
            res.check(ok and count == n_quadratic(n), "minimal-count", n=n, ell=ell, count=count)
            pts = enumerate_gsh_points(minimal_plan(x0, S, ell))
            res.check(qi_poised(pts).poised, "minimal-is-poised", n=n, ell=ell)

            N = random_well_conditioned(rng, n)
            P1 = np.eye(n)[rng.permutation(n)]
            P2 = np.eye(n)[rng.permutation(n)]
            ok2, _ = is_minimal_poised(x0, N @ S @ P1, N @ build_U(S, ell).mat @ P2)
            res.check(ok2, "invariance", n=n, ell=ell)

    for t in range(10):
        n = int(rng.integers(2, 5))
        ell = int(rng.integers(0, n + 1))
        S = 0.3 * random_well_conditioned(rng, n)
        x0 = rng.uniform(-0.5, 0.5, n)
        f = EvaluationOracle(smooth_function(rng, n), n)
        model = qi_closed_form(f, x0, S, ell)
        pts = enumerate_gsh_points(minimal_plan(x0, S, ell)).points
        vals = np.array([f(p) for p in pts])
        scale = max(1.0, np.abs(vals).max())
        res.check(np.abs(model(pts) - vals).max() <= 1e-9 * scale, "closed-form-interpolates", trial=t)
        solved = qi_solve(pts, vals)
        res.check(_rel(model.H, solved.H) <= 1e-8 and _rel(model.alpha, solved.alpha) <= 1e-8
                  and abs(model.alpha0 - solved.alpha0) <= 1e-8 * max(1.0, abs(solved.alpha0)),
                  "closed-form-vs-solve", trial=t)
        G = gsh(f, minimal_plan(x0, S, ell)).matrix
        res.check(_rel(model.H, G) <= 1e-8, "closed-form-vs-gsh", trial=t, rel=_rel(model.H, G))

    X = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1], [-1, -1]], dtype=float)
    res.check(qi_poised(X).poised, "example-set-poised")
    res.check(not find_minimal_poised_representations(X, [0, 0]), "example-set-not-minimal")
    e2 = enumerate_gsh_points(SamplePlan.shared([0, 0], np.eye(2), canonical_E(2, 2)))
    res.check(bool(find_minimal_poised_representations(e2, [0, 0])), "e2-set-minimal")
    return res


def plan_shapes(rng, n):
    """Named sample geometries for dimension ``n``, all with radius about 1."""
    shapes = {
        "determined": SamplePlan.shared(np.zeros(n), random_well_conditioned(rng, n), random_well_conditioned(rng, n)),
        "T-overdetermined": SamplePlan.shared(np.zeros(n), random_well_conditioned(rng, n),
                                              random_well_conditioned(rng, n, n + 1)),
        "T-underdetermined": SamplePlan.shared(np.zeros(n), np.eye(n), np.eye(n)[:, :1]),
        "non-shared": SamplePlan(np.zeros(n), random_well_conditioned(rng, n),
                                 [random_well_conditioned(rng, n, n + int(rng.integers(0, 2))) for _ in range(n)]),
    }
    if n > 1:
        shapes["S-underdetermined"] = SamplePlan.shared(np.zeros(n), np.eye(n)[:, :1], random_well_conditioned(rng, n))
        shapes["S-underdetermined-non-shared"] = SamplePlan(
            np.zeros(n), random_well_conditioned(rng, n, n - 1),
            [random_well_conditioned(rng, n, int(rng.integers(1, n + 1))) for _ in range(n - 1)])
    return shapes


def bounds_suite(seed=0, radii=(1e-1, 1e-2, 1e-3)):
    res = SuiteResult("bounds")
    rng = np.random.default_rng(seed)
    for func in _catalog.catalog():
        n = func.dimension
        x0 = rng.uniform(-0.5, 0.5, n)
        oracle = EvaluationOracle(func.value, n)
        for shape, template in plan_shapes(rng, n).items():
            for mode in (GSH, GCSH):
                for delta in radii:
                    plan = template.with_x0(x0).scaled(delta / template.delta_u)
                    row = study_row(func, x0, plan, mode, oracle)
                    res.check(row.bound is not None and verify_bounds([row]), "bound", function=func.name,
                              shape=shape, mode=mode, delta=delta, error=row.error, bound=row.bound)
        for delta in radii:
            S = random_well_conditioned(rng, n, int(rng.integers(1, n + 2)))
            S = delta * S / np.linalg.norm(S, axis=0).max()
            row = study_row(func, x0, S, GSG, oracle)
            res.check(verify_bounds([row]), "bound", function=func.name, shape="gsg", mode=GSG,
                      delta=delta, error=row.error, bound=row.bound)
    return res


def run_suite(name, seed=0):
    runners = {"linalg": linalg_suite, "hessian": hessian_suite, "poised": poised_suite, "bounds": bounds_suite}
    if name == "all":
        return [runners[s](seed) for s in SUITES]
    if name not in runners:
        raise KeyError(name)
    return [runners[name](seed)]
