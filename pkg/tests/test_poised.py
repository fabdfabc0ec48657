import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simplexhess.exceptions import CardinalityError, InvalidInputError, SingularSystemError
from simplexhess.geometry import SamplePlan, enumerate_gsh_points
from simplexhess.hessian import gsh
from simplexhess.oracle import EvaluationOracle
from simplexhess.poised import (
    QuadraticModel,
    build_U,
    canonical_E,
    find_minimal_poised_representations,
    interpolation_matrix,
    is_minimal_poised,
    minimal_plan,
    n_quadratic,
    qi_closed_form,
    qi_poised,
    qi_solve,
)

R = 1 / math.sqrt(2)
RANK5 = [(1, 0), (0, 1), (-1, 0), (0, -1), (R, R), (-R, -R)]
RANK6 = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (R, -R)]
E2_SET = [(0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (2, -1)]


def rel(A, B):
    return np.abs(np.asarray(A) - B).max() / max(1.0, np.abs(B).max())


def well_conditioned(rng, n, max_cond=20.0):
    while True:
        A = rng.standard_normal((n, n))
        s = np.linalg.svd(A, compute_uv=False)
        if s[0] / s[-1] < max_cond:
            return A


def test_build_U_examples():
    I3 = np.eye(3)
    U = build_U(I3, 1).mat
    np.testing.assert_array_equal(U, np.column_stack([-I3[:, 0], I3[:, 1] - I3[:, 0], I3[:, 2] - I3[:, 0]]))
    np.testing.assert_array_equal(build_U(np.eye(4), 0).mat, np.eye(4))


def test_build_U_errors():
    with pytest.raises(InvalidInputError):
        build_U(np.eye(3), 4)
    with pytest.raises(InvalidInputError):
        build_U(np.eye(3), -1)
    with pytest.raises(InvalidInputError):
        build_U(np.ones((3, 2)), 1)


def test_canonical_E():
    E2 = canonical_E(2, 2).mat
    np.testing.assert_array_equal(E2, np.column_stack([[1, -1], [0, -1]]))
    np.testing.assert_array_equal(canonical_E(2, 0).mat, np.eye(2))
    for n in range(1, 6):
        for ell in range(n + 1):
            assert np.linalg.matrix_rank(canonical_E(n, ell).mat) == n
    with pytest.raises(InvalidInputError):
        canonical_E(0, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data())
def test_build_U_preserves_rank(n, data):
    ell = data.draw(st.integers(0, n))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    S = well_conditioned(rng, n)
    assert np.linalg.matrix_rank(build_U(S, ell).mat) == n


def test_is_minimal_poised_e2_set():
    assert is_minimal_poised(np.zeros(2), np.eye(2), canonical_E(2, 2)) == (True, 6)


def test_is_minimal_poised_scaled_identity():
    # points: 0, e1, e2, 2e1, 2e2, 3e1, e1+2e2, 2e1+e2, 3e2
    ok, count = is_minimal_poised(np.zeros(2), np.eye(2), 2 * np.eye(2))
    assert not ok and count == 9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_is_minimal_poised_random(n):
    rng = np.random.default_rng(n)
    for ell in range(n + 1):
        S = well_conditioned(rng, n)
        assert is_minimal_poised(rng.standard_normal(n), S, build_U(S, ell)) == (True, n_quadratic(n))


def test_is_minimal_poised_rejects_nonsquare():
    with pytest.raises(InvalidInputError):
        is_minimal_poised(np.zeros(2), np.eye(2)[:, :1], np.eye(2))


def test_invariance_under_linear_maps(rng):
    for n in (2, 3, 4):
        for ell in range(n + 1):
            S = well_conditioned(rng, n)
            N = well_conditioned(rng, n)
            P1 = np.eye(n)[rng.permutation(n)]
            P2 = np.eye(n)[rng.permutation(n)]
            ok, _ = is_minimal_poised(np.zeros(n), N @ S @ P1, N @ build_U(S, ell).mat @ P2)
            assert ok


def test_interpolation_matrix_layout():
    M = interpolation_matrix([[2.0, 3.0]])
    np.testing.assert_array_equal(M, [[1.0, 2.0, 3.0, 2.0, 6.0, 4.5]])


def test_qi_poised_classic_sets():
    bad = qi_poised(RANK5)
    assert not bad.poised and bad.system_rank == 5
    good = qi_poised(RANK6)
    assert good.poised and good.system_rank == 6
    assert np.isfinite(good.condition)


def test_qi_poised_cardinality():
    with pytest.raises(CardinalityError):
        qi_poised(RANK5[:5])


@pytest.mark.parametrize("n", range(1, 7))
def test_minimal_sets_are_poised(n):
    rng = np.random.default_rng(10 + n)
    for ell in range(n + 1):
        S = well_conditioned(rng, n)
        assert qi_poised(enumerate_gsh_points(minimal_plan(rng.standard_normal(n), S, ell))).poised


def test_qi_solve_quadratic(rng):
    n = 3
    A = rng.standard_normal((n, n))
    A = A + A.T
    b, c = rng.standard_normal(n), 0.7
    f = lambda x: c + b @ x + 0.5 * x @ A @ x
    pts = enumerate_gsh_points(minimal_plan(np.zeros(n), well_conditioned(rng, n), 1)).points
    model = qi_solve(pts, [f(p) for p in pts])
    assert abs(model.alpha0 - c) <= 1e-9
    np.testing.assert_allclose(model.alpha, b, atol=1e-9)
    np.testing.assert_allclose(model.H, A, atol=1e-9)


def test_qi_solve_constant():
    model = qi_solve(RANK6, [4.0] * 6)
    assert model.alpha0 == pytest.approx(4.0)
    np.testing.assert_allclose(model.alpha, 0, atol=1e-14)
    np.testing.assert_allclose(model.H, 0, atol=1e-14)


def test_qi_solve_singular():
    with pytest.raises(SingularSystemError):
        qi_solve(RANK5, np.arange(6.0))


def test_qi_solve_exp_canonical():
    f = lambda x: math.exp(x[0])
    pts = enumerate_gsh_points(minimal_plan(np.zeros(2), np.eye(2), 0)).points
    model = qi_solve(pts, [f(p) for p in pts])
    np.testing.assert_allclose(model(pts), [f(p) for p in pts], rtol=1e-12)
    assert model.H[0, 0] == pytest.approx(math.e ** 2 - 2 * math.e + 1, rel=1e-12)
    cf = qi_closed_form(f, np.zeros(2), np.eye(2), 0)
    assert rel(cf.H, model.H) <= 1e-12


def test_closed_form_bilinear():
    model = qi_closed_form(lambda x: x[0] * x[1], np.zeros(2), np.eye(2), 0)
    np.testing.assert_array_equal(model.H, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(model.alpha, [0, 0])
    assert model.alpha0 == 0


def test_closed_form_constant(rng):
    model = qi_closed_form(lambda x: -2.0, rng.standard_normal(3), well_conditioned(rng, 3), 2)
    assert model.alpha0 == pytest.approx(-2.0, abs=1e-14)
    np.testing.assert_allclose(model.alpha, 0, atol=1e-13)
    np.testing.assert_allclose(model.H, 0, atol=1e-13)


def test_closed_form_exp_e2_set():
    f = lambda x: math.exp(x[0] + x[1])
    model = qi_closed_form(f, np.zeros(2), np.eye(2), 2)
    pts = np.array(E2_SET, dtype=float)
    solved = qi_solve(pts, [f(p) for p in pts])
    assert rel(model.H, solved.H) <= 1e-12
    assert rel(model.alpha, solved.alpha) <= 1e-12
    assert model.alpha0 == pytest.approx(solved.alpha0, rel=1e-12)


def test_closed_form_rank_deficient():
    with pytest.raises(InvalidInputError):
        qi_closed_form(lambda x: 0.0, np.zeros(2), np.ones((2, 2)), 0)


def test_closed_form_only_touches_minimal_set(rng):
    for n in (2, 3, 4):
        for ell in range(n + 1):
            oracle = EvaluationOracle(lambda x: float(np.cos(x).sum()), n)
            S = 0.4 * well_conditioned(rng, n)
            x0 = rng.uniform(-1, 1, n)
            qi_closed_form(oracle, x0, S, ell)
            pts = enumerate_gsh_points(minimal_plan(x0, S, ell))
            assert oracle.distinct_count == n_quadratic(n)
            assert all(np.frombuffer(k) in pts for k in oracle.memo)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.data())
def test_closed_form_consistency(n, data):
    ell = data.draw(st.integers(0, n))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a = rng.normal(scale=0.7, size=n)
    f = lambda x: float(np.exp(a @ x) + np.sin(x).prod() + x @ x)
    S = 0.3 * well_conditioned(rng, n)
    x0 = rng.uniform(-0.5, 0.5, n)
    model = qi_closed_form(f, x0, S, ell)
    pts = enumerate_gsh_points(minimal_plan(x0, S, ell)).points
    vals = np.array([f(p) for p in pts])
    assert np.abs(model(pts) - vals).max() <= 1e-9 * max(1.0, np.abs(vals).max())
    solved = qi_solve(pts, vals)
    assert rel(model.H, solved.H) <= 1e-8
    assert rel(model.alpha, solved.alpha) <= 1e-8
    assert rel(model.H, gsh(f, minimal_plan(x0, S, ell)).matrix) <= 1e-8


def test_quadratic_model_json():
    m = QuadraticModel(0.5, [1.0, 2.0], [[1.0, 0.25], [0.25, 3.0]])
    again = QuadraticModel.from_json(m.to_json())
    assert again.alpha0 == m.alpha0
    np.testing.assert_array_equal(again.H, m.H)
    np.testing.assert_array_equal(again.alpha, m.alpha)


def test_quadratic_model_symmetrizes():
    m = QuadraticModel(0.0, [0.0, 0.0], [[1.0, 2.0], [0.0, 1.0]])
    np.testing.assert_array_equal(m.H, m.H.T)
    with pytest.raises(InvalidInputError):
        QuadraticModel(0.0, [0.0], [[np.nan]])


def test_example_set_not_minimal():
    X = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (-1, -1)]
    assert qi_poised(X).poised
    assert find_minimal_poised_representations(X, [0, 0]) == []


def test_e2_set_has_representations():
    reps = find_minimal_poised_representations(E2_SET, [0, 0])
    assert reps
    for S, T in reps:
        pts = enumerate_gsh_points(SamplePlan.shared(np.zeros(2), S, T))
        assert pts.same_set(np.array(E2_SET, dtype=float))
    assert any(np.array_equal(S, np.eye(2)) and np.array_equal(T, canonical_E(2, 2).mat) for S, T in reps)


def test_brute_force_limited_to_small_n():
    with pytest.raises(InvalidInputError):
        find_minimal_poised_representations(np.zeros((10, 3)), np.zeros(3))
