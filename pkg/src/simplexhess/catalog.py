"""
Test functions with closed-form derivatives and Lipschitz constants.

Each Lipschitz method takes ``(x0, radius)`` and returns a constant valid on
the closed ball of that radius about ``x0``. Constants bound the next
derivative's Frobenius norm over the ball, which dominates the operator
norm the error bounds use.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import InvalidInputError


@dataclass(frozen=True)
class TestFunction:
    name: str
    dimension: int
    value: Callable
    gradient: Callable
    hessian: Callable
    third: Callable
    lip_grad: Callable
    lip_hess: Callable
    lip_third: Callable
    description: str = ""
    params: dict = field(default_factory=dict, repr=False)

    __test__ = False  # keep pytest from collecting this class

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))


def _zero(*_):
    return 0.0


def quadratic(A, b=None, c=0.0, name="quadratic"):
    """``x^T A x / 2 + b^T x + c`` for symmetric ``A``."""
    A = np.asarray(A, dtype=float)
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    normA = float(np.linalg.norm(A, 2))
    return TestFunction(
        name, n,
        value=lambda x: 0.5 * x @ A @ x + b @ x + c,
        gradient=lambda x: A @ x + b,
        hessian=lambda x: A.copy(),
        third=lambda x: np.zeros((n, n, n)),
        lip_grad=lambda x0, r: normA,
        lip_hess=_zero,
        lip_third=_zero,
        description="quadratic form",
        params={"A": A, "b": b, "c": c},
    )


def cubic_sum(n, name=None):
    """``sum_i x_i**3``. Its Hessian ``diag(6 x)`` is 6-Lipschitz."""

    def third(x):
        T = np.zeros((n, n, n))
        T[np.arange(n), np.arange(n), np.arange(n)] = 6.0
        return T

    return TestFunction(
        name or f"cubicsum{n}", n,
        value=lambda x: float(np.sum(x ** 3)),
        gradient=lambda x: 3 * x ** 2,
        hessian=lambda x: np.diag(6 * x),
        third=third,
        lip_grad=lambda x0, r: 6.0 * (np.max(np.abs(x0)) + r),
        lip_hess=lambda x0, r: 6.0,
        lip_third=_zero,
        description="separable cubic",
    )


def cubic_polynomial(C, A=None, b=None, c=0.0, name="cubic"):
    """
    ``c + b^T x + x^T A x / 2 + C[x, x, x] / 6`` with ``C`` fully symmetric.

    The third derivative is the constant tensor ``C``.
    """
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    C = sum(np.transpose(C, p) for p in
            [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6
    A = np.zeros((n, n)) if A is None else 0.5 * (np.asarray(A, dtype=float) + np.asarray(A, dtype=float).T)
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    normC = float(np.sqrt(np.sum(C * C)))
    normA = float(np.linalg.norm(A, 2))
    return TestFunction(
        name, n,
        value=lambda x: c + b @ x + 0.5 * x @ A @ x + np.einsum("ijk,i,j,k->", C, x, x, x) / 6,
        gradient=lambda x: b + A @ x + 0.5 * np.einsum("ijk,j,k->i", C, x, x),
        hessian=lambda x: A + np.einsum("ijk,k->ij", C, x),
        third=lambda x: C.copy(),
        lip_grad=lambda x0, r: normA + normC * (np.linalg.norm(x0) + r),
        lip_hess=lambda x0, r: normC,
        lip_third=_zero,
        description="general cubic polynomial",
        params={"C": C, "A": A, "b": b, "c": c},
    )


def exp_sum(a, name=None):
    """``exp(a^T x)``; its k-th derivative is ``exp(a^T x) a^{(x)k}``."""
    a = np.asarray(a, dtype=float)
    n = a.size
    na = float(np.linalg.norm(a))

    def peak(x0, r):
        return np.exp(a @ x0 + na * r)

    return TestFunction(
        name or f"expsum{n}", n,
        value=lambda x: float(np.exp(a @ x)),
        gradient=lambda x: np.exp(a @ x) * a,
        hessian=lambda x: np.exp(a @ x) * np.outer(a, a),
        third=lambda x: np.exp(a @ x) * np.einsum("i,j,k->ijk", a, a, a),
        lip_grad=lambda x0, r: na ** 2 * peak(x0, r),
        lip_hess=lambda x0, r: na ** 3 * peak(x0, r),
        lip_third=lambda x0, r: na ** 4 * peak(x0, r),
        description="exponential of a linear form",
        params={"a": a},
    )


def trig_product(n, name=None):
    """``prod_i sin(x_i)``. Every partial derivative is bounded by 1 in magnitude."""

    def partial(x, counts):
        # d^{c_i}/dx_i^{c_i} sin(x_i) = sin(x_i + c_i pi/2)
        return float(np.prod(np.sin(x + np.asarray(counts) * np.pi / 2)))

    def tensor(x, order):
        T = np.empty((n,) * order)
        for idx in np.ndindex(*T.shape):
            T[idx] = partial(x, np.bincount(idx, minlength=n))
        return T

    return TestFunction(
        name or f"trigprod{n}", n,
        value=lambda x: float(np.prod(np.sin(x))),
        gradient=lambda x: tensor(x, 1),
        hessian=lambda x: tensor(x, 2),
        third=lambda x: tensor(x, 3),
        lip_grad=lambda x0, r: float(n),
        lip_hess=lambda x0, r: float(n) ** 1.5,
        lip_third=lambda x0, r: float(n) ** 2,
        description="product of sines",
    )


def rosenbrock(name="rosenbrock"):
    """``100 (x2 - x1**2)**2 + (1 - x1)**2``."""

    def hessian(x):
        return np.array([[1200 * x[0] ** 2 - 400 * x[1] + 2, -400 * x[0]],
                         [-400 * x[0], 200.0]])

    def third(x):
        T = np.zeros((2, 2, 2))
        T[0, 0, 0] = 2400 * x[0]
        T[0, 0, 1] = T[0, 1, 0] = T[1, 0, 0] = -400.0
        return T

    def lip_grad(x0, r):
        X1, X2 = np.abs(x0[0]) + r, np.abs(x0[1]) + r
        return float(np.sqrt((1200 * X1 ** 2 + 400 * X2 + 2) ** 2 + 2 * (400 * X1) ** 2 + 200.0 ** 2))

    def lip_hess(x0, r):
        X1 = np.abs(x0[0]) + r
        return float(np.sqrt((2400 * X1) ** 2 + 3 * 400.0 ** 2))

    return TestFunction(
        name, 2,
        value=lambda x: float(100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2),
        gradient=lambda x: np.array([-400 * x[0] * (x[1] - x[0] ** 2) - 2 * (1 - x[0]),
                                     200 * (x[1] - x[0] ** 2)]),
        hessian=hessian,
        third=third,
        lip_grad=lip_grad,
        lip_hess=lip_hess,
        lip_third=lambda x0, r: 2400.0,
        description="Rosenbrock banana",
    )


def _build():
    rng = np.random.default_rng(20220601)
    funcs = []
    for n in (2, 3):
        B = rng.standard_normal((n, n))
        funcs.append(quadratic(B + B.T, rng.standard_normal(n), float(rng.standard_normal()), name=f"quad{n}"))
    funcs.append(cubic_sum(1, name="cubic1d"))
    funcs += [cubic_sum(2), cubic_sum(3)]
    funcs.append(cubic_polynomial(rng.standard_normal((3, 3, 3)), rng.standard_normal((3, 3)),
                                  rng.standard_normal(3), 0.5, name="cubic3"))
    funcs += [exp_sum([1.0, 1.0]), exp_sum([0.8, -0.5, 1.0])]
    funcs += [trig_product(2), trig_product(3)]
    funcs.append(rosenbrock())
    return funcs


_CATALOG = _build()


def catalog():
    """All named test functions."""
    return list(_CATALOG)


def get(name):
    for f in _CATALOG:
        if f.name == name:
            return f
    raise InvalidInputError(f"unknown function {name!r}; known: {', '.join(f.name for f in _CATALOG)}")
