import logging

import numpy as np
import scipy.linalg

from src.system import Copyable, InvalidArgument, NumericalFailure, NumericValues

logger = logging.getLogger(__name__)

JITTER_REL = 1e-10
JITTER_GROWTH = 100.0
JITTER_RETRIES = 3


def matern32(s, t, ell, var):
    """
    Matern 3/2 covariance ``var (1 + sqrt(3) r / ell) exp(-sqrt(3) r / ell)``, ``r = |s - t|``.

    Broadcasts over ``s`` and ``t``; two scalar points give a Python float.

    Examples
    --------
    >>> matern32(0.3, 0.3, 0.1, 2.0)
    2.0
    """
    if not ell > 0 or not var > 0:
        raise InvalidArgument(f"matern32: ell and var must be positive, got {ell}, {var}.")
    scaled = np.sqrt(3.0) * np.abs(np.asarray(s, dtype=float) - np.asarray(t, dtype=float)) / ell
    value = var * (1.0 + scaled) * np.exp(-scaled)
    if isinstance(s, NumericValues) and isinstance(t, NumericValues):
        return float(value)
    return value


def quadratic_mean(t):
    """Mean function ``-5 + 4 t - 4 t^2`` of the simulated curves."""
    t = np.asarray(t, dtype=float)
    return -5.0 + 4.0 * t - 4.0 * t ** 2


def covariance_matrix(grid, ell, var):
    grid = np.asarray(grid, dtype=float)
    return matern32(grid[:, None], grid[None, :], ell, var)


class KernelFactor(Copyable):
    """
    Lower Cholesky factor of a Matern 3/2 covariance matrix on a grid.

    The factorization of ``K + jitter I`` starts at ``jitter = 1e-10 var``
    and multiplies the jitter by 100 on failure, at most three times.
    Factors are cached in the class registry by grid and hyperparameters.

    Parameters
    ----------
    grid : array_like
        Evaluation points.
    ell : float
        Length scale.
    var : float
        Signal variance.

    Attributes
    ----------
    lower : ndarray
        Factor L with ``L L^T = K + jitter I``.
    jitter : float
        Jitter actually used.
    """

    registry = dict()

    def __init__(self, grid, ell, var):
        self.grid = np.asarray(grid, dtype=float)
        self.ell = float(ell)
        self.var = float(var)
        K = covariance_matrix(self.grid, self.ell, self.var)

        jitter = JITTER_REL * self.var
        for attempt in range(JITTER_RETRIES + 1):
            try:
                self.lower = scipy.linalg.cholesky(K + jitter * np.eye(self.grid.size), lower=True)
                self.jitter = jitter
                break
            except scipy.linalg.LinAlgError:
                logger.debug("KernelFactor: factorization failed with jitter %.1e", jitter)
                jitter *= JITTER_GROWTH
        else:
            raise NumericalFailure(f"KernelFactor: covariance not factorizable after {JITTER_RETRIES} "
                                   f"jitter increases (ell={ell}, var={var}).")

    @staticmethod
    def key(grid, ell, var):
        return (np.asarray(grid, dtype=float).tobytes(), float(ell), float(var))

    @classmethod
    def get(cls, grid, ell, var):
        """Cached factor for ``(grid, ell, var)``, computed on first use."""
        key = cls.key(grid, ell, var)
        factor = cls.retrieve(key)
        if factor is None:
            factor = cls(grid, ell, var)
            cls.store(key, factor)
        return factor


def draw_curve(factor, mean, noise_sd, rng):
    """One curve ``mean + L z + noise`` from a generator."""
    p = mean.size
    curve = mean + factor.lower @ rng.standard_normal(p)
    if noise_sd > 0:
        curve = curve + noise_sd * rng.standard_normal(p)
    return curve


def row_generator(seed, row, attempt=0):
    """Independent stream of one row: the seed, the row index and the redraw count."""
    return np.random.default_rng([seed, row, attempt])


def gp_sample(grid, spec, n):
    """
    Independent noisy Gaussian process curves on a grid.

    Row ``i`` is drawn from its own stream seeded by ``(spec.seed, i)``, so
    samples do not depend on how many rows are requested.

    Parameters
    ----------
    grid : array_like
        Points in ``[0, 1]``.
    spec : SimSpec
        Supplies length scale, signal variance, noise level and seed.
    n : int
        Number of curves.

    Returns
    -------
    ndarray
        Shape (n, len(grid)).

    Raises
    ------
    NumericalFailure
        If the covariance matrix cannot be factorized.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0) or np.any(grid > 1):
        raise InvalidArgument("gp_sample: the grid must lie in [0, 1].")
    factor = KernelFactor.get(grid, spec.length_scale, spec.signal_var)
    mean = quadratic_mean(grid)
    return np.array([draw_curve(factor, mean, spec.noise_sd, row_generator(spec.seed, i)) for i in range(n)]) \
        .reshape(n, grid.size)
