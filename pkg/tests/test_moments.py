"""Tests for the inverse-regression moments."""

import numpy as np

from src.sir import SliceAssignment, compute_moments, make_slices


class TestComputeMoments:
    """Hand-computed and degenerate cases."""

    def test_hand_computed_example(self):
        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        y = np.array([1.0, 2.0, 3.0, 4.0])
        m = compute_moments(X, y, make_slices(y, 2))
        np.testing.assert_allclose(m.grand_mean, [0.5])
        np.testing.assert_allclose(m.slice_means, [[0.0], [1.0]])
        np.testing.assert_allclose(m.sigma_hat, [[0.25]])
        np.testing.assert_allclose(m.gamma_hat, [[0.25]])

    def test_identical_rows(self):
        X = np.tile([1.0, -2.0, 3.0], (6, 1))
        y = np.arange(6.0)
        m = compute_moments(X, y, make_slices(y, 3))
        np.testing.assert_array_equal(m.sigma_hat, np.zeros((3, 3)))
        np.testing.assert_array_equal(m.gamma_hat, np.zeros((3, 3)))

    def test_single_slice_has_no_between_variance(self, rng):
        X = rng.normal(size=(8, 3))
        slices = SliceAssignment(slice_of=np.ones(8, dtype=int), H=1, counts=np.array([8]), upper=np.array([1.0]))
        m = compute_moments(X, np.zeros(8), slices)
        np.testing.assert_allclose(m.gamma_hat, np.zeros((3, 3)), atol=1e-15)

    def test_one_point_per_slice_recovers_covariance(self, rng):
        X = rng.normal(size=(12, 4))
        y = rng.normal(size=12)
        m = compute_moments(X, y, make_slices(y, 12))
        np.testing.assert_allclose(m.gamma_hat, m.sigma_hat, atol=1e-14)

    def test_frequencies(self, rng):
        y = rng.normal(size=23)
        m = compute_moments(rng.normal(size=(23, 2)), y, make_slices(y, 5))
        assert np.all(m.freqs > 0)
        np.testing.assert_allclose(m.freqs.sum(), 1.0)


class TestMomentProperties:
    """Loewner order, rank bound and permutation invariance."""

    def test_loewner_order_on_random_data(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n, p, H = rng.integers(10, 40), rng.integers(1, 8), rng.integers(2, 6)
            X = rng.normal(size=(n, p))
            y = rng.normal(size=n)
            m = compute_moments(X, y, make_slices(y, H))
            assert np.linalg.eigvalsh(m.sigma_hat - m.gamma_hat).min() >= -1e-10
            assert np.trace(m.gamma_hat) <= np.trace(m.sigma_hat) + 1e-12
            assert np.linalg.eigvalsh(m.gamma_hat).min() >= -1e-10

    def test_rank_bound(self, rng):
        X = rng.normal(size=(50, 10))
        y = rng.normal(size=50)
        m = compute_moments(X, y, make_slices(y, 4))
        assert np.sum(np.linalg.eigvalsh(m.gamma_hat) > 1e-10) <= 3

    def test_row_permutation_invariance(self, rng):
        X = rng.normal(size=(30, 5))
        y = rng.normal(size=30)
        m = compute_moments(X, y, make_slices(y, 5))
        perm = rng.permutation(30)
        mp = compute_moments(X[perm], y[perm], make_slices(y[perm], 5))
        np.testing.assert_allclose(mp.sigma_hat, m.sigma_hat, atol=1e-12)
        np.testing.assert_allclose(mp.gamma_hat, m.gamma_hat, atol=1e-12)
        np.testing.assert_allclose(mp.slice_means, m.slice_means, atol=1e-12)
