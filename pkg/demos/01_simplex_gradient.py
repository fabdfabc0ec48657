# %% [markdown]
# # Simplex gradients from function values
#
# A generalized simplex gradient uses only `f(x0)` and `f(x0 + s^j)` for the
# columns `s^j` of a direction matrix `S`. With `S = h * I` it is the usual
# forward-difference gradient. With fewer columns than dimensions it
# recovers the part of the gradient that lies in the span of `S`.

# %%
import numpy as np

from simplexhess import catalog, gsg, gsg_error_bound, project_gradient

f = catalog.get("expsum3")
x0 = np.array([0.2, -0.1, 0.3])
print("true gradient:", f.gradient(x0))

# %%
for h in (1e-1, 1e-2, 1e-3):
    est = gsg(f, x0, h * np.eye(3))
    print(f"h={h:g}  estimate={est.vector}  evals={est.eval_count}")

# %% [markdown]
# ## Fewer directions than dimensions
#
# Two directions in R^3 pin down the gradient only inside their span, so the
# error is measured after projecting onto that span.

# %%
S = 0.01 * np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
g = gsg(f, x0, S).vector
err = np.linalg.norm(project_gradient(g - f.gradient(x0), S))
bound = gsg_error_bound(S, f.lip_grad(x0, 0.01 * np.sqrt(2)))
print(f"projected error {err:.3e} <= bound {bound:.3e}")

# %% [markdown]
# A nearly degenerate `S` inflates the bound through the norm of the
# pseudoinverse of the normalized directions.

# %%
for tilt in (1.0, 1e-1, 1e-2, 1e-3):
    S = np.array([[1.0, 1.0], [0.0, tilt]])
    print(f"tilt={tilt:g}  bound/L/radius = {gsg_error_bound(S, 1.0) / np.linalg.norm(S, axis=0).max():.2f}")
