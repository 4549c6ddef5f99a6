"""Tests for the interval Lasso path: oracle agreement, KKT, GCV and thresholding."""

import itertools

import numpy as np
import pytest

from src.sparse import (LassoPath, LassoSettings, SparseProblem, coordinate_descent, gcv_score, kkt_residual,
                        lasso_path, select_gcv, threshold_solutions)
from src.system import InvalidArgument


def random_problem(rng, N, D):
    design = rng.normal(size=(N, D))
    target = design @ rng.normal(size=D) + 0.5 * rng.normal(size=N)
    return SparseProblem(target=target, design=design, partition=None, fit=None)


def oracle(G, c, mu):
    """Exhaustive sign-pattern enumeration of the Lasso solution."""
    D = c.size
    best, best_obj = None, np.inf
    for signs in itertools.product((-1, 0, 1), repeat=D):
        s = np.array(signs, dtype=float)
        act = s != 0
        alpha = np.zeros(D)
        if act.any():
            alpha[act] = np.linalg.solve(G[np.ix_(act, act)], c[act] - mu * s[act])
            if np.any(np.sign(alpha[act]) != s[act]):
                continue
        g = c - G @ alpha
        if np.any(np.abs(g[~act]) > mu + 1e-12):
            continue
        obj = 0.5 * alpha @ G @ alpha - c @ alpha + mu * np.abs(alpha).sum()
        if obj < best_obj:
            best, best_obj = alpha, obj
    return best


def assert_kkt(path, problem, tol=1e-6):
    G, c = problem.normal_equations()
    for mu, alpha in zip(path.mu1_grid, path.alphas):
        g = c - G @ alpha
        zero = alpha == 0
        assert np.all(np.abs(g[zero]) <= mu + tol)
        assert np.all(np.abs(g[~zero] - mu * np.sign(alpha[~zero])) <= tol)
        assert kkt_residual(G, c, alpha, mu) <= tol


class TestCoordinateDescent:
    """Single-point solves."""

    def test_zero_at_mu_max(self, rng):
        problem = random_problem(rng, 12, 4)
        G, c = problem.normal_equations()
        alpha, converged, _ = coordinate_descent(G, c, np.abs(c).max())
        assert converged
        np.testing.assert_array_equal(alpha, np.zeros(4))

    def test_orthonormal_design_without_penalty(self, rng):
        N, D = 16, 4
        Q, _ = np.linalg.qr(rng.normal(size=(N, D)))
        design = np.sqrt(N) * Q
        target = rng.normal(size=N)
        problem = SparseProblem(target=target, design=design, partition=None, fit=None)
        G, c = problem.normal_equations()
        alpha, _, _ = coordinate_descent(G, c, 0.0)
        np.testing.assert_allclose(alpha, design.T @ target / N, atol=1e-10)

    def test_zero_columns_stay_zero(self, rng):
        problem = random_problem(rng, 10, 3)
        design = problem.design.copy()
        design[:, 1] = 0.0
        problem = SparseProblem(target=problem.target, design=design, partition=None, fit=None)
        G, c = problem.normal_equations()
        alpha, _, _ = coordinate_descent(G, c, 1e-3, alpha0=np.ones(3))
        assert alpha[1] == 0.0

    def test_objective_never_increases(self, rng):
        problem = random_problem(rng, 20, 5)
        G, c = problem.normal_equations()
        const = problem.target @ problem.target / (2 * problem.N)
        settings = LassoSettings(record_history=True)
        _, _, history = coordinate_descent(G, c, 0.05 * np.abs(c).max(), settings=settings, const=const)
        assert len(history) >= 1
        assert np.all(np.diff(history) <= 1e-12 * max(1.0, abs(history[0])))


class TestOracleEquivalence:
    """Coordinate descent matches exhaustive enumeration on small instances."""

    def test_random_instances(self):
        rng = np.random.default_rng(2024)
        settings = LassoSettings(grid_size=10)
        for _ in range(50):
            D = int(rng.integers(1, 6))
            N = int(rng.integers(D + 2, 31))
            problem = random_problem(rng, N, D)
            G, c = problem.normal_equations()
            path = lasso_path(problem, settings)
            for mu, alpha in zip(path.mu1_grid, path.alphas):
                np.testing.assert_allclose(alpha, oracle(G, c, mu), atol=1e-5)

    def test_four_interval_instance(self):
        rng = np.random.default_rng(4)
        problem = random_problem(rng, 12, 4)
        G, c = problem.normal_equations()
        path = lasso_path(problem)
        for i in (10, 50, 99):
            np.testing.assert_allclose(path.alphas[i], oracle(G, c, path.mu1_grid[i]), atol=1e-5)


class TestLassoPath:
    """Grid, KKT, continuity and degenerate targets."""

    def test_grid(self, rng):
        path = lasso_path(random_problem(rng, 15, 4))
        assert path.G == 100
        assert np.all(np.diff(path.mu1_grid) < 0)
        np.testing.assert_allclose(path.mu1_grid[-1] / path.mu1_grid[0], 1e-3)
        np.testing.assert_array_equal(path.alphas[0], np.zeros(4))
        assert path.nnz[0] == 0

    def test_mu_max(self, rng):
        problem = random_problem(rng, 15, 4)
        path = lasso_path(problem)
        np.testing.assert_allclose(path.mu1_grid[0], np.abs(problem.design.T @ problem.target).max() / 15)

    def test_kkt_on_every_point(self):
        rng = np.random.default_rng(5)
        for N, D in [(10, 3), (30, 8), (20, 25), (15, 6)]:
            problem = random_problem(rng, N, D)
            path = lasso_path(problem)
            assert path.converged.all()
            assert_kkt(path, problem)

    def test_refined_grid_matches(self, rng):
        problem = random_problem(rng, 20, 4)
        coarse = lasso_path(problem, LassoSettings(grid_size=11))
        fine = lasso_path(problem, LassoSettings(grid_size=21))
        np.testing.assert_allclose(fine.mu1_grid[::2], coarse.mu1_grid, rtol=1e-12)
        np.testing.assert_allclose(fine.alphas[::2], coarse.alphas, atol=1e-4)

    def test_zero_target(self, rng):
        problem = SparseProblem(target=np.zeros(12), design=rng.normal(size=(12, 3)), partition=None, fit=None)
        path = lasso_path(problem)
        assert path.degenerate_target
        np.testing.assert_array_equal(path.mu1_grid, [0.0])
        np.testing.assert_array_equal(path.alphas, np.zeros((1, 3)))

    def test_settings_validation(self):
        with pytest.raises(InvalidArgument):
            LassoSettings(grid_size=1)
        with pytest.raises(InvalidArgument):
            LassoSettings(eps_ratio=1.5)


def manual_path(nnz, D, rss=None, N=100):
    alphas = np.zeros((len(nnz), D))
    for i, m in enumerate(nnz):
        alphas[i, :m] = 1.0
    rss = np.ones(len(nnz)) if rss is None else np.asarray(rss, dtype=float)
    gcv = np.array([gcv_score(r, m, N) for r, m in zip(rss, nnz)])
    return LassoPath(mu1_grid=np.geomspace(1.0, 0.1, len(nnz)), alphas=alphas, nnz=np.array(nnz), rss=rss,
                     gcv=gcv, N=N)


class TestSelectGcv:
    """GCV selection."""

    def test_single_solution(self):
        path = manual_path([0], 3)
        mu, alpha = select_gcv(path)
        assert mu == 1.0
        np.testing.assert_array_equal(alpha, np.zeros(3))

    def test_smaller_df_wins_on_equal_rss(self):
        path = manual_path([2, 5], 6, rss=[3.0, 3.0], N=10)
        _, alpha = select_gcv(path)
        assert np.count_nonzero(alpha) == 2

    def test_gcv_formula(self, rng):
        problem = random_problem(rng, 12, 4)
        path = lasso_path(problem)
        for alpha, gcv in zip(path.alphas, path.gcv):
            r = problem.target - problem.design @ alpha
            nnz = np.count_nonzero(alpha)
            np.testing.assert_allclose(gcv, (r @ r) / (12 * (1 - nnz / 12) ** 2), rtol=1e-10)

    def test_all_infinite_returns_sparsest(self):
        path = manual_path([3, 3], 3, N=3)
        assert path.best_index == 0


class TestThresholdSolutions:
    """Near-sparse and near-dense extraction."""

    def test_scan_rule(self):
        path = manual_path([0, 1, 3, 10], 20)
        alpha_plus, _, _, D2 = threshold_solutions(path, 0.05)
        assert np.count_nonzero(alpha_plus) == 1
        assert D2 == set(range(1, 20))

    def test_proportion_one(self):
        path = manual_path([0, 1, 3], 5)
        alpha_plus, alpha_minus, D1, D2 = threshold_solutions(path, 1.0)
        np.testing.assert_array_equal(alpha_plus, path.alphas[-1])
        np.testing.assert_array_equal(alpha_minus, np.zeros(5))
        assert D1 == set()
        assert D2 == {3, 4}

    def test_all_zero_path(self):
        path = manual_path([0, 0, 0], 4)
        _, _, D1, D2 = threshold_solutions(path, 0.05)
        assert D1 == set()
        assert D2 == {0, 1, 2, 3}

    def test_near_dense_solution(self):
        path = manual_path([0, 2, 6, 9, 10], 10)
        _, alpha_minus, D1, _ = threshold_solutions(path, 0.3)
        assert np.count_nonzero(alpha_minus) == 6
        assert D1 == set(range(6))

    def test_rejects_non_positive_proportion(self):
        with pytest.raises(InvalidArgument):
            threshold_solutions(manual_path([0], 2), 0.0)
