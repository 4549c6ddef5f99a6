import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.data import Dataset
from src.simulate.kernels import KernelFactor, draw_curve, gp_sample, quadratic_mean, row_generator
from src.system import InvalidArgument, SimulationFailure

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
MAX_REDRAWS = 100

INTERVALS = {
    "M1": ((0.2, 0.4),),
    "M2": ((0.0, 0.1), (0.5, 0.65), (0.65, 0.78)),
}
DEFAULT_P = {"M1": 200, "M2": 300}


@dataclass(frozen=True)
class SimSpec:
    """
    Settings of a simulated dataset.

    Attributes
    ----------
    model : str
        ``"M1"`` (one direction) or ``"M2"`` (three directions); case-insensitive.
    n : int
        Number of curves.
    p : int, optional
        Grid size; 200 for M1 and 300 for M2 when omitted.
    length_scale, signal_var : float
        Matern 3/2 hyperparameters.
    noise_sd : float
        Standard deviation of the pointwise measurement noise.
    seed : int
    """
    model: str = "M1"
    n: int = 100
    p: Optional[int] = None
    length_scale: float = 0.1
    signal_var: float = 1.0
    noise_sd: float = 0.1
    seed: int = 0

    def __post_init__(self):
        model = str(self.model).upper()
        if model not in INTERVALS:
            raise InvalidArgument(f"SimSpec: unknown model {self.model!r}; expected M1 or M2.")
        object.__setattr__(self, "model", model)
        if self.p is None:
            object.__setattr__(self, "p", DEFAULT_P[model])
        if self.p < 2:
            raise InvalidArgument(f"SimSpec: p must be >= 2, got {self.p}.")
        if self.n < 2:
            raise InvalidArgument(f"SimSpec: n must be >= 2, got {self.n}.")
        if not self.length_scale > 0 or not self.signal_var > 0:
            raise InvalidArgument("SimSpec: length_scale and signal_var must be positive.")
        if self.noise_sd < 0:
            raise InvalidArgument(f"SimSpec: noise_sd must be nonnegative, got {self.noise_sd}.")

    @property
    def grid(self):
        """Uniform grid of ``p`` points over ``[0, 1]``."""
        return np.linspace(0.0, 1.0, self.p)


@dataclass(frozen=True, eq=False)
class TrueModel:
    """
    Directions generating a simulated response.

    Attributes
    ----------
    directions : ndarray
        Shape (p, d_true); column j vanishes outside ``intervals[j]``.
    intervals : tuple of (float, float)
    """
    directions: np.ndarray
    intervals: tuple

    @property
    def d(self) -> int:
        return self.directions.shape[1]

    def support(self, grid):
        """Boolean mask of grid points inside some generating interval."""
        grid = np.asarray(grid, dtype=float)
        return np.any([(grid >= lo) & (grid <= hi) for lo, hi in self.intervals], axis=0)


def true_directions(grid, model):
    """
    Interval-supported sine directions of a simulation model.

    Direction j (from 1) is ``sin(t (2 + j) pi / 2 - (j - 1) pi / 3)`` on its
    interval and zero elsewhere.

    Examples
    --------
    >>> truth = true_directions([0.0, 1 / 3, 0.5], "M1")
    >>> truth.directions[:, 0].round(12).tolist()
    [0.0, 1.0, 0.0]
    """
    grid = np.asarray(grid, dtype=float)
    model = str(model).upper()
    if model not in INTERVALS:
        raise InvalidArgument(f"true_directions: unknown model {model!r}.")
    if np.any(grid < 0) or np.any(grid > 1):
        raise InvalidArgument("true_directions: the grid must lie in [0, 1].")

    columns = []
    for j, (lo, hi) in enumerate(INTERVALS[model], start=1):
        inside = (grid >= lo) & (grid <= hi)
        columns.append(np.where(inside, np.sin(grid * (2 + j) * np.pi / 2 - (j - 1) * np.pi / 3), 0.0))
    return TrueModel(directions=np.column_stack(columns), intervals=INTERVALS[model])


def projections(X, directions):
    """Riemann-sum inner products ``(1/p) sum_l x(t_l) a(t_l)``, shape (n, d)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return X @ np.asarray(directions, dtype=float) / X.shape[1]


def functional_response(X, directions):
    """
    Log-absolute-projection response ``y = sum_j log |<x, a_j>|``.

    Parameters
    ----------
    X : array_like
        Curves, shape (n, p).
    directions : array_like
        Shape (p, d).

    Returns
    -------
    ndarray
        Shape (n,); ``-inf`` where a projection is exactly zero.
    """
    with np.errstate(divide="ignore"):
        return np.log(np.abs(projections(X, directions))).sum(axis=1)


def response_with_redraw(X, directions, redraw, max_redraws=MAX_REDRAWS):
    """
    Response of every row, redrawing rows whose projections come too close to zero.

    Parameters
    ----------
    X : ndarray
        Curves, shape (n, p); singular rows are replaced in place.
    directions : array_like
        Shape (p, d).
    redraw : callable
        ``redraw(row, attempt)`` returns a fresh curve for ``row``.
    max_redraws : int, optional

    Returns
    -------
    y : ndarray
    redrawn : int
        Number of redraws performed.

    Raises
    ------
    SimulationFailure
        If a row stays singular after ``max_redraws`` redraws.
    """
    redrawn = 0
    for i in range(X.shape[0]):
        attempt = 0
        while np.any(np.abs(projections(X[i], directions)) < SINGULAR_TOL):
            attempt += 1
            if attempt > max_redraws:
                raise SimulationFailure(f"response_with_redraw: row {i} still singular after {max_redraws} redraws.")
            X[i] = redraw(i, attempt)
            redrawn += 1
    if redrawn:
        logger.info("response_with_redraw: %d row(s) redrawn", redrawn)
    return functional_response(X, directions), redrawn


def simulate_dataset(spec):
    """
    Simulated curves and responses of model M1 or M2.

    Returns
    -------
    dataset : Dataset
    truth : TrueModel
    """
    grid = spec.grid
    truth = true_directions(grid, spec.model)
    X = gp_sample(grid, spec, spec.n)

    factor = KernelFactor.get(grid, spec.length_scale, spec.signal_var)
    mean = quadratic_mean(grid)

    def redraw(row, attempt):
        return draw_curve(factor, mean, spec.noise_sd, row_generator(spec.seed, row, attempt))

    y, _ = response_with_redraw(X, truth.directions, redraw)
    logger.info("simulate_dataset: model %s, n=%d, p=%d, seed=%d", spec.model, spec.n, spec.p, spec.seed)
    return Dataset(X=X, y=y, grid=grid), truth
