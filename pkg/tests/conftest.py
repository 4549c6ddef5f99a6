import numpy as np
import pytest

from src.data import Dataset


def single_index_data(n, p, seed=0, noise=0.1):
    """Gaussian curves with a response driven by one direction supported on the first third of the grid."""
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 1.0, p)
    X = rng.normal(size=(n, p))
    beta = np.where(grid <= 1.0 / 3.0, 1.0, 0.0)
    y = X @ beta / np.sqrt(beta.sum()) + noise * rng.normal(size=n)
    return Dataset(X=X, y=y, grid=grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def low_dim_data():
    """n >> p data where classical SIR is well defined."""
    return single_index_data(n=200, p=6, seed=1)


@pytest.fixture
def high_dim_data():
    """p > n data that needs ridging."""
    return single_index_data(n=40, p=60, seed=2)
