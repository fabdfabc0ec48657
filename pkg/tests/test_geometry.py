import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simplexhess.exceptions import InvalidInputError, ZeroRadiusError
from simplexhess.geometry import (
    Case,
    DirectionMatrix,
    PointSet,
    SamplePlan,
    classify,
    dedup,
    enumerate_gcsh_points,
    enumerate_gsh_points,
    normalize,
)
from simplexhess.poised import build_U, canonical_E, n_quadratic

E2_SET = [(0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (2, -1)]


def brute_points(x0, S, T, centered=False):
    """Exact rational enumeration of the GSH (or GCSH) sample set."""
    x0 = tuple(Fraction(v) for v in x0)
    cols = lambda M: [tuple(Fraction(v) for v in c) for c in np.asarray(M).T.tolist()]
    add = lambda p, q: tuple(a + b for a, b in zip(p, q))
    neg = lambda p: tuple(-a for a in p)
    out = set()
    for sign in ((1, -1) if centered else (1,)):
        Sc = [c if sign > 0 else neg(c) for c in cols(S)]
        Tc = [c if sign > 0 else neg(c) for c in cols(T)]
        out.add(x0)
        for s in Sc:
            out.add(add(x0, s))
            for t in Tc:
                out.add(add(x0, t))
                out.add(add(add(x0, s), t))
    return out


def test_direction_matrix_radius():
    D = DirectionMatrix([[1.0, 3.0], [0.0, 4.0]])
    assert D.radius == 5.0
    assert D.shape == (2, 2)
    with pytest.raises(ZeroRadiusError):
        DirectionMatrix(np.zeros((2, 2)))
    with pytest.raises(InvalidInputError):
        DirectionMatrix([[np.inf]])


def test_direction_matrix_immutable():
    D = DirectionMatrix(np.eye(2))
    with pytest.raises(ValueError):
        D.mat[0, 0] = 3.0


@pytest.mark.parametrize("D, expected", [
    (0.1 * np.eye(2), np.eye(2)),
    ([[1.0, 3.0], [0.0, 4.0]], [[0.2, 0.6], [0.0, 0.8]]),
    (np.eye(3), np.eye(3)),
])
def test_normalize(D, expected):
    N = normalize(D)
    np.testing.assert_allclose(N.mat, expected, atol=1e-15)
    assert abs(N.radius - 1.0) <= 1e-14


def test_normalize_zero():
    with pytest.raises(ZeroRadiusError):
        normalize(np.zeros((2, 1)))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.floats(1e-6, 1e6), st.integers(0, 2**32 - 1))
def test_radius_scaling(n, m, alpha, seed):
    D = DirectionMatrix(np.random.default_rng(seed).standard_normal((n, m)))
    assert D.scaled(alpha).radius == pytest.approx(alpha * D.radius, rel=1e-13)


def test_plan_validation():
    with pytest.raises(InvalidInputError):
        SamplePlan(np.zeros(2), np.eye(2), [np.eye(2)])
    with pytest.raises(InvalidInputError):
        SamplePlan(np.zeros(3), np.eye(2), [np.eye(2)] * 2)
    with pytest.raises(InvalidInputError):
        SamplePlan(np.zeros(2), np.eye(2), [np.eye(2), 2 * np.eye(2)], shared_T=True)
    p = SamplePlan(np.zeros(2), np.eye(2), [np.eye(2), np.eye(2)])
    assert p.shared_T
    q = SamplePlan(np.zeros(2), np.eye(2), [np.eye(2), np.eye(2)], shared_T=False)
    assert not q.shared_T


def test_plan_radii():
    p = SamplePlan(np.zeros(2), 0.5 * np.eye(2), [np.eye(2), 2 * np.eye(2)[:, :1]])
    assert p.delta_S == 0.5
    assert p.delta_T == 2.0
    assert p.delta_u == 2.0
    assert p.delta_l == 0.5
    assert p.k == 2
    assert p.m == 2


def test_classify_examples():
    I3 = np.eye(3)
    lab = classify(SamplePlan(np.zeros(3), I3, [I3] * 3))
    assert (lab.s_case, lab.t_case) == (Case.DETERMINED, Case.DETERMINED)
    lab = classify(SamplePlan.shared(np.zeros(3), I3[:, :2], I3))
    assert lab.s_case == Case.UNDERDETERMINED
    S = np.column_stack([I3[:, 0], 2 * I3[:, 0]])
    assert classify(SamplePlan.shared(np.zeros(3), S, I3)).s_case == Case.NONDETERMINED


def test_classify_t_family():
    I2 = np.eye(2)
    wide = np.hstack([I2, I2[:, :1]])
    assert classify(SamplePlan(np.zeros(2), I2, [I2, wide])).t_case == Case.OVERDETERMINED
    assert classify(SamplePlan(np.zeros(2), I2, [I2, I2[:, :1]])).t_case == Case.UNDERDETERMINED
    assert classify(SamplePlan(np.zeros(2), I2, [wide, I2[:, :1]])).t_case == Case.NONDETERMINED
    assert classify(SamplePlan.shared(np.zeros(2), wide, I2)).s_case == Case.OVERDETERMINED


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(1, 5), st.booleans(), st.integers(0, 2**32 - 1))
def test_classify_permutation_invariant(n, m, k, deficient, seed):
    rng = np.random.default_rng(seed)
    S = rng.standard_normal((n, m))
    if deficient and m > 1:
        S[:, -1] = S[:, 0]
    Ts = [rng.standard_normal((n, k)) for _ in range(m)]
    plan = SamplePlan(np.zeros(n), S, Ts)
    perm = rng.permutation(m)
    permuted = SamplePlan(np.zeros(n), S[:, perm], [Ts[i][:, rng.permutation(k)] for i in perm])
    assert classify(plan) == classify(permuted)


def test_e2_point_set():
    pts = enumerate_gsh_points(SamplePlan.shared([0, 0], np.eye(2), canonical_E(2, 2)))
    assert [tuple(p) for p in pts.sorted()] == E2_SET


def test_one_dimensional_sets():
    h = 0.25
    plan = SamplePlan.shared([0.0], [[h]], [[h]])
    assert sorted(enumerate_gsh_points(plan).points.ravel()) == [0, h, 2 * h]
    assert sorted(enumerate_gcsh_points(plan).points.ravel()) == [-2 * h, -h, 0, h, 2 * h]


def test_three_dim_identity_count():
    assert len(enumerate_gsh_points(SamplePlan.shared(np.zeros(3), np.eye(3), build_U(np.eye(3), 0)))) == 10


def test_gcsh_count_identity_two_dim():
    # Exact rational enumeration gives 11: six GSH points and five new ones
    # from the negated plan (x0 is shared).
    h = 0.1
    plan = SamplePlan.shared(np.zeros(2), h * np.eye(2), h * np.eye(2))
    expected = brute_points(np.zeros(2), [[Fraction(1, 10), 0], [0, Fraction(1, 10)]],
                            [[Fraction(1, 10), 0], [0, Fraction(1, 10)]], centered=True)
    assert len(expected) == 11
    assert len(enumerate_gcsh_points(plan)) == 11


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_counts_match_rational_enumeration(n, m, k, seed):
    rng = np.random.default_rng(seed)
    S = rng.integers(-2, 3, size=(n, m)).astype(float)
    T = rng.integers(-2, 3, size=(n, k)).astype(float)
    if not S.any() or not T.any():
        return
    x0 = rng.integers(-3, 4, size=n).astype(float)
    plan = SamplePlan.shared(x0, S, T)
    assert len(enumerate_gsh_points(plan)) == len(brute_points(x0, S, T))
    assert len(enumerate_gcsh_points(plan)) == len(brute_points(x0, S, T, centered=True))
    assert len(enumerate_gsh_points(plan)) <= (m + 1) * (k + 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_minimal_counts(n):
    rng = np.random.default_rng(n)
    for ell in range(n + 1):
        S = rng.standard_normal((n, n))
        x0 = rng.uniform(-1, 1, n)
        assert len(enumerate_gsh_points(SamplePlan.shared(x0, S, build_U(S, ell)))) == n_quadratic(n)


def test_gcsh_superset(rng):
    for _ in range(10):
        plan = SamplePlan(rng.standard_normal(3), rng.standard_normal((3, 2)),
                          [rng.standard_normal((3, 2)), rng.standard_normal((3, 3))])
        assert enumerate_gcsh_points(plan).issuperset(enumerate_gsh_points(plan))


def test_dedup_tolerance():
    pts = np.array([[1.0, 2.0], [1.0 + 1e-15, 2.0], [1.0 + 1e-6, 2.0]])
    unique, index = dedup(pts)
    assert len(unique) == 2
    assert list(index) == [0, 0, 1]
    unique, _ = dedup(pts, tol=1e-3)
    assert len(unique) == 1


def test_dedup_relative_scale():
    big = np.array([[1e8, 0.0], [1e8 + 1e-5, 0.0]])
    assert len(dedup(big)[0]) == 1


def test_summation_order_rounding_merges():
    # 0.1 + 0.2 and 0.3 differ in the last bit but count as one point
    ps = PointSet([[0.1 + 0.2], [0.3]])
    assert len(ps) == 1


def test_point_set_serialization():
    ps = PointSet([[0.0, -1.0], [1.0, 0.5], [0.1 + 0.2, 3.0]])
    assert PointSet.from_json(ps.to_json()).same_set(ps)
    again = PointSet.from_csv(ps.to_csv())
    np.testing.assert_array_equal(again.points, ps.points)
    assert json.loads(ps.to_json()) == ps.points.tolist()


def test_point_set_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        PointSet([[np.nan, 0.0]])


def test_plan_transformations():
    plan = SamplePlan(np.ones(2), np.eye(2), [np.eye(2), 2 * np.eye(2)])
    neg = plan.negated()
    np.testing.assert_array_equal(neg.S.mat, -np.eye(2))
    st_ = plan.stacked()
    assert st_.m == 4 and not st_.shared_T
    np.testing.assert_array_equal(st_.Ts[3].mat, -2 * np.eye(2))
    assert plan.scaled(0.5).delta_u == 1.0
    with pytest.raises(InvalidInputError):
        plan.swapped()
    sh = SamplePlan.shared(np.zeros(2), np.eye(2)[:, :1], np.eye(2))
    sw = sh.swapped()
    assert sw.S.shape == (2, 2) and sw.T.shape == (2, 1)
