# %% [markdown]
# # Simplex Hessians and their centered variant
#
# A sample plan holds a point `x0`, a direction matrix `S` and one matrix
# `T_i` per column of `S`. The simplex Hessian differences simplex gradients
# over `T_i` taken at `x0 + s^i` and at `x0`. The centered version averages
# the plan with its mirror image and gains one order of accuracy.

# %%
import numpy as np

from simplexhess import SamplePlan, catalog, classify, gcsh, gsh, project_hessian

f = catalog.get("trigprod2")
x0 = np.array([0.4, 0.9])
H = f.hessian(x0)
print("true Hessian:\n", H)

# %%
for h in (1e-1, 1e-2):
    plan = SamplePlan.shared(x0, h * np.eye(2), h * np.eye(2))
    a, b = gsh(f, plan), gcsh(f, plan)
    print(f"h={h:g}  GSH err {np.linalg.norm(a.matrix - H, 2):.2e} ({a.eval_count} evals)"
          f"  GCSH err {np.linalg.norm(b.matrix - H, 2):.2e} ({b.eval_count} evals)")

# %% [markdown]
# ## Three ways to get the centered estimate
#
# The centered Hessian equals the average of the simplex Hessians over
# `(S, T)` and `(-S, -T)`, and also the simplex Hessian over the stacked
# plan `([S, -S], {T, -T})`.

# %%
rng = np.random.default_rng(0)
plan = SamplePlan(x0, 0.1 * rng.standard_normal((2, 3)), [0.1 * rng.standard_normal((2, 2)) for _ in range(3)])
direct = gcsh(f, plan).matrix
average = 0.5 * (gsh(f, plan).matrix + gsh(f, plan.negated()).matrix)
stacked = gsh(f, plan.stacked()).matrix
print(np.abs(direct - average).max(), np.abs(direct - stacked).max())

# %% [markdown]
# ## Underdetermined geometry
#
# With a single direction in `S` only one row of the Hessian is visible.
# The estimate converges to the projected Hessian, not to `H`.

# %%
plan = SamplePlan.shared(x0, 0.01 * np.eye(2)[:, :1], 0.01 * np.eye(2))
print(classify(plan))
est = gsh(f, plan).matrix
print("estimate:\n", est)
print("projected true Hessian:\n", project_hessian(H, plan))

# %% [markdown]
# The raw simplex Hessian need not be symmetric. `symmetrize=True` returns
# `(M + M^T) / 2` when a symmetric matrix is wanted.

# %%
plan = SamplePlan(x0, 0.05 * np.eye(2), [0.05 * np.eye(2), 0.02 * np.eye(2)])
print(gsh(f, plan).matrix)
print(gsh(f, plan, symmetrize=True).matrix)
