from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algstat.algebra import MPoly, det_exact
from algstat.mle import (
    DomainError,
    check_critical,
    det_critical_points,
    em_low_rank,
    equal_up_to_simultaneous_permutation,
    hardy_weinberg_curve,
    hardy_weinberg_mle,
    independence_mle,
    log_likelihood,
    log_likelihood_grad,
    ml_degree_plane,
    plane_critical_system,
    random_dense_curve,
    special_quadric,
)
from algstat.mle.plane import PLANE_VARS, meets_excluded_locus_generically

counts = st.integers(min_value=1, max_value=60)


@settings(max_examples=50, deadline=None)
@given(st.lists(counts, min_size=4, max_size=4), st.floats(min_value=0.1, max_value=10))
def test_log_likelihood_is_scale_invariant(u, c):
    p = np.array([1.0, 2.0, 3.0, 4.0])
    assert log_likelihood(c * p, u) == pytest.approx(log_likelihood(p, u), abs=1e-9)


def test_log_likelihood_domain():
    with pytest.raises(DomainError):
        log_likelihood([1, 0], [1, 1])
    with pytest.raises(DomainError):
        log_likelihood([1, 1], [0, 0])


def test_gradient_vanishes_at_empirical_distribution():
    u = np.array([3.0, 5.0, 7.0])
    assert np.allclose(log_likelihood_grad(u / u.sum(), u), 0)


@settings(max_examples=50, deadline=None)
@given(counts, counts, counts)
def test_hardy_weinberg_on_curve(u0, u1, u2):
    p = hardy_weinberg_mle(u0, u1, u2)
    assert p[1] ** 2 == 4 * p[0] * p[2]
    assert sum(p) == 1
    theta = Fraction(2 * u0 + u1, 2 * (u0 + u1 + u2))
    assert p == (theta**2, 2 * theta * (1 - theta), (1 - theta) ** 2)


def test_independence_mle_rank_one_and_stationary():
    u = [[4, 1, 3], [2, 6, 5]]
    P = independence_mle(u)
    assert sum(map(sum, P)) == 1
    assert all(P[0][a] * P[1][b] == P[0][b] * P[1][a] for a in range(3) for b in range(3))
    rep = check_critical(P, u, 1)
    assert rep["projected_gradient_norm"] < 1e-12
    assert rep["exact_rank"] == 1


def test_check_critical_rejects_off_model_points():
    with pytest.raises(DomainError):
        check_critical([[1, 2], [3, 5]], [[1, 1], [1, 1]], 1)


def test_check_critical_sees_non_critical_point():
    P = [[Fraction(1, 4)] * 2] * 2
    rep = check_critical(P, [[9, 1], [1, 1]], 1)
    assert rep["projected_gradient_norm"] > 1e-3


def test_hardy_weinberg_curve_has_degree_one():
    res = ml_degree_plane(hardy_weinberg_curve(), [3, 5, 7])
    assert res.count == 1 and res.count_interval is None
    pt = res.points[0]
    exact = np.array(hardy_weinberg_mle(3, 5, 7), dtype=float)
    assert np.allclose(pt / pt.sum(), exact, atol=1e-12)


@pytest.mark.parametrize("lam, expected", [(1, 2), (2, 2), (3, 2), (4, 1)])
def test_special_quadrics(lam, expected):
    res = ml_degree_plane(special_quadric(lam), [2, 7, 3])
    assert res.count == expected and not res.flagged


def test_excluded_components_are_stripped():
    p = MPoly.gens(PLANE_VARS)
    F = p[0] * hardy_weinberg_curve()
    res = ml_degree_plane(F, [3, 5, 7])
    assert res.count == 1
    assert ml_degree_plane(p[0] * p[0], [1, 2, 3]).count == 0


def test_critical_system_determinant():
    F, G = plane_critical_system(special_quadric(1), [1, 1, 1])
    p0, p1, p2 = MPoly.gens(PLANE_VARS)
    dF = [F.diff(i) for i in range(3)]
    rows = [[MPoly.const(PLANE_VARS, 1), p, p * d] for p, d in zip((p0, p1, p2), dF)]
    assert G == det_exact(rows)
    with pytest.raises(ValueError):
        plane_critical_system(p0 * p0 + p1, [1, 1, 1])


def test_random_curves_are_generic():
    rng = np.random.default_rng(0)
    for _ in range(5):
        assert meets_excluded_locus_generically(random_dense_curve(2, rng))
    # passes through the vertex (1:-1:0)
    assert not meets_excluded_locus_generically(MPoly.gens(PLANE_VARS)[0] * 1 + MPoly.gens(PLANE_VARS)[1])


def test_random_quadric_count_and_residuals():
    rng = np.random.default_rng(4)
    F = random_dense_curve(2, rng)
    res = ml_degree_plane(F, [int(x) for x in rng.integers(1, 30, 3)], seed=1)
    assert res.count == 6 and len(res.points) == 6
    assert max(res.residuals) < 1e-12


def test_det_closed_form_rank_one():
    res = det_critical_points(2, 3, 1, [[1, 2, 3], [4, 5, 6]])
    assert res.count == 1


def test_det_points_closed_under_transpose_for_symmetric_data():
    u = np.array([[10, 3, 5], [3, 8, 2], [5, 2, 12]])
    res = det_critical_points(3, 3, 2, u, n_starts=3000, seed=2)
    assert res.count == 10
    pts = [p.reshape(3, 3) for p in res.points]
    for P in pts:
        T = P.T.ravel()
        T = T / T[np.argmax(np.abs(T))]
        assert min(np.linalg.norm(T - q.ravel()) for q in pts) < 1e-8
        # real data: closed under conjugation too
        C = np.conj(P).ravel()
        C = C / C[np.argmax(np.abs(C))]
        assert min(np.linalg.norm(C - q.ravel()) for q in pts) < 1e-8


def test_det_solver_scope():
    with pytest.raises(DomainError):
        det_critical_points(3, 4, 2, np.ones((3, 4)))


def test_em_monotone_and_consistent():
    u = [[5, 1, 2], [1, 6, 1], [2, 1, 7]]
    res = em_low_rank(u, 2, n_starts=8, seed=3, keep_traces=True)
    for tr in res.traces:
        assert all(b >= a - 1e-9 * abs(a) for a, b in zip(tr, tr[1:]))
    assert res.log_likelihood == pytest.approx(log_likelihood(res.best_table, u))
    assert np.linalg.matrix_rank(res.best_table, tol=1e-10) <= 2
    assert 1 <= res.n_improvals <= res.n_starts


def test_em_rank_one_reaches_closed_form():
    u = [[4, 1, 3], [2, 6, 5]]
    res = em_low_rank(u, 1, n_starts=3)
    assert np.allclose(res.best_table, np.array(independence_mle(u), dtype=float), atol=1e-10)


def test_permutation_equality():
    A = np.arange(9.0).reshape(3, 3)
    s = [2, 0, 1]
    assert equal_up_to_simultaneous_permutation(A[np.ix_(s, s)], A, 0)
    assert not equal_up_to_simultaneous_permutation(A.T + 1, A, 1e-3)
