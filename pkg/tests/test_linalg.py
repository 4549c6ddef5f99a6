"""Tests for the symmetric eigen tools and M-orthogonal projectors."""

import numpy as np
import pytest

from src.sir import inv_sqrt, projector_gap, ridge_projector, sym_eigen
from src.system import InvalidData, RankDeficient, SingularMatrix


def random_spd(rng, p):
    B = rng.normal(size=(p, p))
    return B @ B.T + p * np.eye(p)


class TestSymEigen:
    """Ordering, signs and accuracy."""

    def test_identity(self):
        e = sym_eigen(np.eye(3))
        np.testing.assert_allclose(e.values, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(e.vectors, np.eye(3))

    def test_diagonal(self):
        e = sym_eigen(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(e.values, [3.0, 2.0, 1.0])
        np.testing.assert_allclose(np.abs(e.vectors), np.eye(3)[:, [0, 2, 1]], atol=1e-14)

    def test_two_by_two(self):
        e = sym_eigen([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(e.values, [3.0, 1.0])
        np.testing.assert_allclose(e.vectors[:, 0], np.array([1.0, 1.0]) / np.sqrt(2.0))
        np.testing.assert_allclose(e.vectors[:, 1], np.array([1.0, -1.0]) / np.sqrt(2.0))

    def test_decomposition(self, rng):
        M = random_spd(rng, 6) - 5 * np.eye(6)
        e = sym_eigen(M)
        assert np.all(np.diff(e.values) <= 0)
        np.testing.assert_allclose(e.vectors.T @ e.vectors, np.eye(6), atol=1e-10)
        np.testing.assert_allclose(M @ e.vectors, e.vectors * e.values, atol=1e-8 * np.abs(e.values).max())
        lead = np.argmax(np.abs(e.vectors), axis=0)
        assert np.all(e.vectors[lead, np.arange(6)] > 0)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidData):
            sym_eigen([[1.0, np.inf], [np.inf, 1.0]])


class TestInvSqrt:
    """Inverse square roots of ridged PSD matrices."""

    def test_identity(self):
        np.testing.assert_allclose(inv_sqrt(np.eye(3)), np.eye(3))

    def test_ridged_diagonal(self):
        np.testing.assert_allclose(inv_sqrt(np.diag([3.0, 0.0]), ridge=1.0), np.diag([0.5, 1.0]))

    def test_two_by_two(self):
        M = np.array([[2.0, 1.0], [1.0, 2.0]])
        u = np.array([1.0, 1.0]) / np.sqrt(2.0)
        v = np.array([1.0, -1.0]) / np.sqrt(2.0)
        expected = np.outer(u, u) / np.sqrt(3.0) + np.outer(v, v)
        W = inv_sqrt(M)
        np.testing.assert_allclose(W, expected)
        np.testing.assert_allclose(W @ M @ W, np.eye(2), atol=1e-12)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            inv_sqrt(np.diag([1.0, 0.0]))


class TestRidgeProjector:
    """Projector algebra and the projector-norm identity."""

    def test_coordinate_projector(self):
        Pi = ridge_projector(np.eye(4)[:, :2], np.eye(4))
        np.testing.assert_allclose(Pi, np.diag([1.0, 1.0, 0.0, 0.0]), atol=1e-14)

    def test_full_rank_is_identity(self, rng):
        A = rng.normal(size=(3, 3))
        M = random_spd(rng, 3)
        np.testing.assert_allclose(ridge_projector(A, M), np.eye(3), atol=1e-10)

    def test_projector_properties(self, rng):
        A = rng.normal(size=(7, 3))
        M = random_spd(rng, 7)
        Pi = ridge_projector(A, M)
        np.testing.assert_allclose(Pi @ Pi, Pi, atol=1e-8)
        np.testing.assert_allclose(M @ Pi, Pi.T @ M, atol=1e-8)
        np.testing.assert_allclose(np.trace(Pi), 3.0, atol=1e-10)

    def test_rank_deficient(self):
        A = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
        with pytest.raises(RankDeficient):
            ridge_projector(A, np.eye(3))

    def test_norm_identity_on_random_fixtures(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = int(rng.integers(2, 31))
            d = int(rng.integers(1, p + 1))
            M = random_spd(rng, p)
            Pi = ridge_projector(rng.normal(size=(p, d)), M)
            Pi_hat = ridge_projector(rng.normal(size=(p, d)), M)
            gap = projector_gap(Pi, Pi_hat, metric=M)
            assert abs(gap - (d - np.trace(Pi @ Pi_hat))) <= 1e-10 * max(1.0, d)

    def test_gap_of_equal_projectors_is_zero(self, rng):
        M = random_spd(rng, 5)
        Pi = ridge_projector(rng.normal(size=(5, 2)), M)
        assert projector_gap(Pi, Pi, metric=M) == 0.0
