"""Tests for the sparse problem builder and the shrunk directions."""

from types import SimpleNamespace

import numpy as np
import pytest

from src.containers import IntervalPartition
from src.sir import RidgeFit, compute_moments, make_slices, ridge_sir_fit
from src.sparse import active_intervals, build_problem, interval_design, projection_target, sparse_directions


def toy_fit(A, C=None, sigma=None, mu2=1.0):
    A = np.asarray(A, dtype=float)
    p = A.shape[0]
    moments = SimpleNamespace(sigma_hat=np.zeros((p, p)) if sigma is None else sigma, p=p)
    C = np.zeros((A.shape[1], 2)) if C is None else np.asarray(C, dtype=float)
    return RidgeFit(A=A, C=C, eigenvalues=np.zeros(A.shape[1]), mu2=mu2, moments=moments)


class TestProjectionTarget:
    """Stacked slice-mean projections."""

    def test_unrolled_definition(self):
        fit = toy_fit(np.ones((3, 1)), C=[[0.5, -0.5]])
        slices = make_slices([2.0, 1.0], 2)
        np.testing.assert_array_equal(projection_target(fit, slices), [-0.5, 0.5])

    def test_stacking_order(self):
        fit = toy_fit(np.ones((3, 2)), C=[[1.0, 2.0, 3.0], [10.0, 20.0, 30.0]])
        slices = make_slices([0.3, 0.1, 0.2], 3)
        np.testing.assert_array_equal(projection_target(fit, slices), [3.0, 1.0, 2.0, 30.0, 10.0, 20.0])

    def test_slice_constant(self, high_dim_data):
        slices = make_slices(high_dim_data.y, 4)
        fit = ridge_sir_fit(compute_moments(high_dim_data.X, high_dim_data.y, slices), 1.0, 2)
        target = projection_target(fit, slices).reshape(2, -1)
        for h in range(1, 5):
            rows = slices.members(h)
            assert np.ptp(target[:, rows], axis=1).max() == 0.0


class TestIntervalDesign:
    """Interval-restricted scores."""

    def test_singletons(self, rng):
        X = rng.normal(size=(5, 4))
        A = rng.normal(size=(4, 2))
        part = IntervalPartition.singletons(np.linspace(0, 1, 4))
        design = interval_design(X, toy_fit(A), part)
        np.testing.assert_allclose(design[:5], X * A[:, 0])
        np.testing.assert_allclose(design[5:], X * A[:, 1])

    def test_single_interval_is_full_score(self, rng):
        X = rng.normal(size=(5, 4))
        A = rng.normal(size=(4, 2))
        design = interval_design(X, toy_fit(A), IntervalPartition.whole(np.linspace(0, 1, 4)))
        np.testing.assert_allclose(design[:, 0], np.concatenate([X @ A[:, 0], X @ A[:, 1]]))

    def test_zero_direction_on_interval(self, rng):
        X = rng.normal(size=(5, 4))
        A = np.array([[1.0], [2.0], [0.0], [0.0]])
        design = interval_design(X, toy_fit(A), IntervalPartition([0, 2], np.linspace(0, 1, 4)))
        np.testing.assert_array_equal(design[:, 1], np.zeros(5))

    def test_builder_centers_the_curves(self, high_dim_data):
        slices = make_slices(high_dim_data.y, 4)
        fit = ridge_sir_fit(compute_moments(high_dim_data.X, high_dim_data.y, slices), 1.0, 1)
        problem = build_problem(high_dim_data.X, fit, slices, IntervalPartition.whole(high_dim_data.grid))
        np.testing.assert_allclose(problem.design.sum(axis=0), 0.0, atol=1e-10)
        assert problem.N == high_dim_data.n


class TestSparseDirections:
    """Shrinkage and re-orthonormalization."""

    def test_identity_shrinkage(self, high_dim_data):
        slices = make_slices(high_dim_data.y, 5)
        fit = ridge_sir_fit(compute_moments(high_dim_data.X, high_dim_data.y, slices), 1.0, 3)
        part = IntervalPartition([0, 20, 40], high_dim_data.grid)
        out = sparse_directions(fit, np.ones(3), part)
        np.testing.assert_allclose(out.A_sparse, fit.A, atol=1e-8)
        assert not out.empty_model
        assert out.support == {0, 1, 2}

    def test_zero_shrinkage_is_empty(self, high_dim_data):
        slices = make_slices(high_dim_data.y, 5)
        fit = ridge_sir_fit(compute_moments(high_dim_data.X, high_dim_data.y, slices), 1.0, 2)
        with pytest.warns(RuntimeWarning):
            out = sparse_directions(fit, np.zeros(1), IntervalPartition.whole(high_dim_data.grid))
        assert out.empty_model
        assert out.A_sparse.shape == (high_dim_data.p, 0)

    def test_vanishing_direction_is_dropped(self):
        A = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]) / np.sqrt(2.0)
        fit = toy_fit(A, mu2=1.0)
        with pytest.warns(RuntimeWarning):
            out = sparse_directions(fit, [1.0, 0.0], IntervalPartition([0, 2], np.linspace(0, 1, 4)))
        assert out.A_sparse.shape[1] == 1
        assert out.dropped == (1,)

    def test_zero_pattern_and_orthonormality(self, high_dim_data):
        slices = make_slices(high_dim_data.y, 5)
        fit = ridge_sir_fit(compute_moments(high_dim_data.X, high_dim_data.y, slices), 1.0, 3)
        part = IntervalPartition([0, 10, 25, 40, 50], high_dim_data.grid)
        alpha = np.array([0.8, 0.0, 1.3, 0.0, -0.4])
        out = sparse_directions(fit, alpha, part)
        member = part.membership
        for k in range(part.D):
            rows = out.A_sparse[member == k]
            if alpha[k] == 0:
                assert np.all(rows == 0.0)
        d = out.A_sparse.shape[1]
        np.testing.assert_allclose(out.A_sparse.T @ fit.metric @ out.A_sparse, np.eye(d), atol=1e-8)


class TestActiveIntervals:
    """Runs of nonzero coefficients."""

    def test_runs(self):
        part = IntervalPartition.singletons(np.linspace(0, 1, 5))
        np.testing.assert_array_equal(active_intervals(part, [0, 1.2, 0.4, 0, 2.0]), [[1, 2], [4, 4]])

    def test_none_active(self):
        part = IntervalPartition([0, 2], np.linspace(0, 1, 5))
        assert active_intervals(part, [0.0, 0.0]).shape == (0, 2)

    def test_wide_intervals(self):
        part = IntervalPartition([0, 2, 3], np.linspace(0, 1, 6))
        np.testing.assert_array_equal(active_intervals(part, [1.0, 1.0, 0.0]), [[0, 2]])
