# %% [markdown]
# # Minimal poised sets
#
# A quadratic on R^n has (n+1)(n+2)/2 coefficients. Pairing a square `S` with
# `T = U_ell(S)` makes the simplex Hessian touch exactly that many distinct
# points. Those points determine a unique interpolating quadratic, and its
# Hessian is the simplex Hessian.

# %%
import numpy as np

from simplexhess import (
    EvaluationOracle,
    build_U,
    canonical_E,
    enumerate_gsh_points,
    find_minimal_poised_representations,
    gsh,
    minimal_plan,
    n_quadratic,
    qi_closed_form,
    qi_poised,
    qi_solve,
)

# %%
print("E_2 in R^2:\n", canonical_E(2, 2).mat)
pts = enumerate_gsh_points(minimal_plan(np.zeros(2), np.eye(2), 2))
print(pts.sorted())

# %% [markdown]
# Counting points and evaluations for random `S`:

# %%
rng = np.random.default_rng(3)
for n in range(2, 6):
    S = rng.standard_normal((n, n))
    counts = []
    for ell in range(n + 1):
        oracle = EvaluationOracle(lambda x: float(np.cos(x).sum()), n)
        gsh(oracle, minimal_plan(rng.standard_normal(n), S, ell))
        counts.append(oracle.distinct_count)
    print(n, n_quadratic(n), counts)

# %% [markdown]
# ## Closed form versus a linear solve

# %%
f = lambda x: float(np.exp(x[0] - 0.5 * x[1]) + x[2] ** 3)
S = 0.3 * rng.standard_normal((3, 3))
x0 = np.array([0.1, 0.2, -0.1])
model = qi_closed_form(f, x0, S, ell=2)
pts = enumerate_gsh_points(minimal_plan(x0, S, 2)).points
solved = qi_solve(pts, [f(p) for p in pts])
print(np.abs(model.H - solved.H).max(), np.abs(model.H - gsh(f, minimal_plan(x0, S, 2)).matrix).max())
print(qi_poised(pts))

# %% [markdown]
# ## Poised is not the same as minimal poised
#
# The six points below are poised for quadratic interpolation, yet no
# choice of `S` and `T` from the set reproduces them as a simplex-Hessian
# sample set at the origin.

# %%
X = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1], [-1, -1]], dtype=float)
print(qi_poised(X).poised, len(find_minimal_poised_representations(X, [0, 0])))

e2 = enumerate_gsh_points(minimal_plan(np.zeros(2), np.eye(2), 2))
print(len(find_minimal_poised_representations(e2, [0, 0])), "representations of the E_2 set")

# %% [markdown]
# Linear maps and column permutations keep a set minimal poised.

# %%
from simplexhess import is_minimal_poised

N = rng.standard_normal((3, 3))
S = rng.standard_normal((3, 3))
U = build_U(S, 1).mat
P = np.eye(3)[[2, 0, 1]]
print(is_minimal_poised(np.zeros(3), S, U), is_minimal_poised(np.zeros(3), N @ S @ P, N @ U))
