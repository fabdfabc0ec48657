# %% [markdown]
# # Convergence orders
#
# Shrinking a sample plan by a factor `delta` should shrink the simplex
# Hessian error like `delta` and the centered error like `delta**2`. Each
# row also carries the theoretical bound computed from the analytic
# Lipschitz constants of the catalog function.

# %%
import numpy as np

from simplexhess import SamplePlan, catalog, convergence_study, verify_bounds

template = SamplePlan.shared(np.zeros(3), np.eye(3), np.eye(3))
x0 = np.array([0.3, -0.2, 0.1])

# %%
for name in ("cubicsum3", "expsum3", "trigprod3"):
    f = catalog.get(name)
    for mode in ("GSH", "GCSH"):
        rep = convergence_study(f, x0, template, mode=mode)
        order = "exact" if rep.exact else f"{rep.fitted_order:.3f}"
        print(f"{name:10s} {mode:5s} order {order:>6s}  bounds hold: {verify_bounds(rep)}")

# %% [markdown]
# The CSV form is ready for an external plotting tool.

# %%
rep = convergence_study(catalog.get("expsum3"), x0, template, mode="GCSH")
print(rep.to_csv())

# %% [markdown]
# ## Anisotropic plans
#
# The template keeps its shape while shrinking; only the largest radius is
# pinned to `delta`. A long thin plan has a larger ratio of radii and a
# looser bound, but the order is unchanged.

# %%
thin = SamplePlan.shared(np.zeros(3), np.diag([1.0, 0.5, 0.25]), np.eye(3))
rep = convergence_study(catalog.get("expsum3"), x0, thin, mode="GSH")
print(rep.fitted_order, max(r.error / r.bound for r in rep.rows))
