from dataclasses import dataclass

import numpy as np

from src.system import InvalidData, all_finite, is_strictly_increasing


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    A digitized functional predictor with its evaluation grid and a scalar response.

    Parameters
    ----------
    X : array_like
        Predictor matrix, shape (n, p). Row ``i`` is the curve ``x_i`` sampled
        on the grid.
    y : array_like
        Response vector, shape (n,).
    grid : array_like
        Strictly increasing evaluation grid ``t_1 < ... < t_p``.

    Raises
    ------
    InvalidData
        If ``n < 2``, ``p < 1``, shapes disagree, the grid is not strictly
        increasing, or any entry is not finite.

    Examples
    --------
    >>> ds = Dataset(X=[[1.0, 2.0], [3.0, 4.0]], y=[0.5, 1.5], grid=[0.0, 1.0])
    >>> ds.n, ds.p
    (2, 2)
    """
    X: np.ndarray
    y: np.ndarray
    grid: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        grid = np.asarray(self.grid, dtype=float).ravel()

        if X.shape[0] < 2:
            raise InvalidData(f"Dataset: at least 2 observations are required, got {X.shape[0]}.")
        if X.shape[1] < 1 or X.shape[1] != grid.size:
            raise InvalidData(f"Dataset: X has {X.shape[1]} columns but the grid has {grid.size} points.")
        if y.size != X.shape[0]:
            raise InvalidData(f"Dataset: X has {X.shape[0]} rows but y has {y.size} entries.")
        if not is_strictly_increasing(grid):
            raise InvalidData("Dataset: the grid must be strictly increasing.")
        if not all_finite(X, y, grid):
            raise InvalidData("Dataset: non-finite entries in X, y or grid.")

        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "grid", grid)

    @property
    def n(self) -> int:
        """Number of observations."""
        return self.X.shape[0]

    @property
    def p(self) -> int:
        """Number of grid points."""
        return self.X.shape[1]

    def subset(self, rows):
        """Dataset restricted to the given observation rows."""
        rows = np.asarray(rows)
        return Dataset(X=self.X[rows], y=self.y[rows], grid=self.grid)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (np.array_equal(self.X, other.X) and np.array_equal(self.y, other.y)
                and np.array_equal(self.grid, other.grid))


def first_derivative(dataset):
    """
    Finite-difference derivative of every predictor curve.

    Spectrometric curves often carry their information in the derivative
    rather than in the raw absorbance; this turns a dataset into the dataset
    of derivatives on the same grid, using second-order central differences
    inside the grid and one-sided differences at both ends.

    Parameters
    ----------
    dataset : Dataset
        Input data; needs at least 2 grid points.

    Returns
    -------
    Dataset
        Same response and grid, ``X`` replaced by ``dX/dt``.

    Raises
    ------
    InvalidData
        If the grid has a single point.
    """
    if dataset.p < 2:
        raise InvalidData("first_derivative: at least 2 grid points are required.")
    dX = np.gradient(dataset.X, dataset.grid, axis=1)
    return Dataset(X=dX, y=dataset.y, grid=dataset.grid)
