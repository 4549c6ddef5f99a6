import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from src.system import InvalidArgument

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LassoSettings:
    """
    Regularization path and solver settings.

    Attributes
    ----------
    grid_size : int
        Number of mu1 values on the path (default 100).
    eps_ratio : float
        Smallest mu1 as a fraction of mu_max (default 1e-3).
    tol : float
        Relative bound on the largest coordinate update of a converged sweep.
    kkt_tol : float
        Bound on the stationarity residual of an accepted solution.
    max_sweeps : int
        Safeguard on coordinate-descent sweeps per grid point.
    record_history : bool
        Keep the penalized objective after every sweep.
    """
    grid_size: int = 100
    eps_ratio: float = 1e-3
    tol: float = 1e-7
    kkt_tol: float = 1e-8
    max_sweeps: int = 100000
    record_history: bool = False

    def __post_init__(self):
        if self.grid_size < 2:
            raise InvalidArgument(f"LassoSettings: grid_size must be >= 2, got {self.grid_size}.")
        if not 0 < self.eps_ratio < 1:
            raise InvalidArgument(f"LassoSettings: eps_ratio must be in (0, 1), got {self.eps_ratio}.")
        if self.tol <= 0 or self.kkt_tol <= 0 or self.max_sweeps < 1:
            raise InvalidArgument("LassoSettings: tolerances and max_sweeps must be positive.")


@dataclass(frozen=True, eq=False)
class LassoPath:
    """
    Solutions of the interval Lasso along a decreasing mu1 grid.

    Attributes
    ----------
    mu1_grid : ndarray
        Decreasing regularization values, shape (G,); ``mu1_grid[0]`` is mu_max.
    alphas : ndarray
        Solutions, shape (G, D); the first one is all-zero.
    nnz : ndarray
        Nonzero count of every solution.
    rss : ndarray
        Residual sum of squares ``||P - Delta alpha||^2``.
    gcv : ndarray
        Generalized cross-validation score of every solution.
    N : int
        Number of stacked rows ``d * n``.
    degenerate_target : bool
        True when the target carries no signal (the path is the single point
        ``mu1 = 0``, ``alpha = 0``).
    converged : ndarray of bool
        Whether every grid point met the convergence criteria.
    histories : tuple
        Per grid point, the penalized objective after every sweep (empty
        unless requested).
    """
    mu1_grid: np.ndarray
    alphas: np.ndarray
    nnz: np.ndarray
    rss: np.ndarray
    gcv: np.ndarray
    N: int
    degenerate_target: bool = False
    converged: np.ndarray = None
    histories: tuple = field(default_factory=tuple)

    @property
    def G(self) -> int:
        return self.mu1_grid.size

    @property
    def D(self) -> int:
        return self.alphas.shape[1]

    @property
    def best_index(self) -> int:
        """Index of the smallest GCV score; ties go to the larger mu1."""
        if not np.any(np.isfinite(self.gcv)):
            return 0
        return int(np.argmin(self.gcv))


def soft_threshold(z, mu):
    return np.sign(z) * max(abs(z) - mu, 0.0)


def penalized_objective(G, c, const, alpha, mu):
    """``(1/2N)||P - Delta alpha||^2 + mu ||alpha||_1`` from the normal equations (``const = P^T P / 2N``)."""
    return float(0.5 * alpha @ G @ alpha - c @ alpha + const + mu * np.abs(alpha).sum())


def kkt_residual(G, c, alpha, mu):
    """Largest violation of the Lasso stationarity conditions."""
    g = c - G @ alpha
    active = alpha != 0
    zero_part = np.maximum(np.abs(g[~active]) - mu, 0.0)
    active_part = np.abs(g[active] - mu * np.sign(alpha[active]))
    return float(max(zero_part.max(initial=0.0), active_part.max(initial=0.0)))


def _sweep(G, g, alpha, mu, coords):
    """One pass of cyclic coordinate descent over ``coords``; updates ``g = c - G alpha`` in place."""
    max_step = 0.0
    for k in coords:
        gkk = G[k, k]
        if gkk <= 0.0:
            continue
        old = alpha[k]
        new = soft_threshold(g[k] + gkk * old, mu) / gkk
        if new != old:
            g -= G[:, k] * (new - old)
            alpha[k] = new
            max_step = max(max_step, abs(new - old))
    return max_step


def coordinate_descent(G, c, mu, alpha0=None, settings=None, const=0.0):
    """
    Minimize ``0.5 a^T G a - c^T a + mu ||a||_1`` by cyclic coordinate descent.

    Sweeps alternate between the full coordinate set and the current active
    set; a solution is accepted once a full sweep moves no coordinate by more
    than ``tol * (1 + ||a||_inf)`` and the stationarity residual is below
    ``kkt_tol * max(1, ||c||_inf)``. Coordinates with a zero diagonal stay at zero.

    Parameters
    ----------
    G : ndarray
        Gram matrix ``Delta^T Delta / N``, shape (D, D).
    c : ndarray
        Correlations ``Delta^T P / N``, shape (D,).
    mu : float
        Regularization value.
    alpha0 : ndarray, optional
        Warm start (default: zeros).
    settings : LassoSettings, optional
    const : float, optional
        ``P^T P / 2N``; only shifts the recorded objective values.

    Returns
    -------
    alpha : ndarray
    converged : bool
    history : list of float
        Objective after every sweep, when ``settings.record_history`` is set.
    """
    settings = LassoSettings() if settings is None else settings
    D = c.size
    alpha = np.zeros(D) if alpha0 is None else np.array(alpha0, dtype=float)
    alpha[np.diag(G) <= 0.0] = 0.0
    everything = np.arange(D)
    kkt_bound = settings.kkt_tol * max(1.0, float(np.abs(c).max(initial=0.0)))
    history = []

    for sweep in range(settings.max_sweeps):
        g = c - G @ alpha
        step = _sweep(G, g, alpha, mu, everything)
        if settings.record_history:
            history.append(penalized_objective(G, c, const, alpha, mu))
        if step < settings.tol * (1.0 + np.abs(alpha).max(initial=0.0)) \
                and kkt_residual(G, c, alpha, mu) <= kkt_bound:
            return alpha, True, history

        # inner passes on the active set
        active = np.flatnonzero(alpha)
        for _ in range(settings.max_sweeps if active.size else 0):
            step = _sweep(G, g, alpha, mu, active)
            if settings.record_history:
                history.append(penalized_objective(G, c, const, alpha, mu))
            if step < settings.tol * (1.0 + np.abs(alpha).max(initial=0.0)):
                break

    msg = f"coordinate_descent: no convergence after {settings.max_sweeps} sweeps at mu={mu:.3e}."
    logger.warning(msg)
    warnings.warn(msg, RuntimeWarning)
    return alpha, False, history


def gcv_score(rss, nnz, N):
    """``RSS / (N (1 - nnz/N)^2)``; infinite when ``nnz >= N``."""
    if nnz >= N:
        return math.inf
    return float(rss / (N * (1.0 - nnz / N) ** 2))


def _path_point(problem, alpha):
    residual = problem.target - problem.design @ alpha
    rss = float(residual @ residual)
    nnz = int(np.count_nonzero(alpha))
    return nnz, rss, gcv_score(rss, nnz, problem.N)


def lasso_path(problem, settings=None):
    """
    Regularization path of the interval Lasso.

    Minimizes ``(1/2N)||P - Delta alpha||^2 + mu1 ||alpha||_1`` with ``N = d n``
    on a geometric grid from ``mu_max = ||Delta^T P||_inf / N`` down to
    ``eps_ratio * mu_max``, warm-starting every point from the previous one.

    Parameters
    ----------
    problem : SparseProblem
    settings : LassoSettings, optional

    Returns
    -------
    LassoPath
        A target with no signal (``mu_max = 0``) gives the one-point path
        ``mu1 = 0``, ``alpha = 0`` flagged ``degenerate_target``.
    """
    settings = LassoSettings() if settings is None else settings
    G, c = problem.normal_equations()
    const = float(problem.target @ problem.target) / (2.0 * problem.N)
    D = problem.D
    mu_max = float(np.abs(c).max(initial=0.0))

    if not mu_max > 0.0:
        logger.debug("lasso_path: degenerate target (mu_max = 0)")
        nnz, rss, gcv = _path_point(problem, np.zeros(D))
        return LassoPath(mu1_grid=np.zeros(1), alphas=np.zeros((1, D)), nnz=np.array([nnz]),
                         rss=np.array([rss]), gcv=np.array([gcv]), N=problem.N, degenerate_target=True,
                         converged=np.ones(1, dtype=bool),
                         histories=((),) if settings.record_history else ())

    grid = np.geomspace(mu_max, settings.eps_ratio * mu_max, settings.grid_size)
    alphas = np.zeros((grid.size, D))
    converged = np.ones(grid.size, dtype=bool)
    histories = []
    alpha = np.zeros(D)
    for i, mu in enumerate(grid):
        alpha, converged[i], history = coordinate_descent(G, c, mu, alpha, settings, const)
        alphas[i] = alpha
        histories.append(tuple(history))
    # zero at mu_max
    alphas[0] = 0.0

    points = [_path_point(problem, a) for a in alphas]
    nnz, rss, gcv = (np.array(v) for v in zip(*points))
    logger.debug("lasso_path: D=%d, N=%d, mu_max=%.3e, densest nnz=%d", D, problem.N, mu_max, nnz.max())
    return LassoPath(mu1_grid=grid, alphas=alphas, nnz=nnz.astype(int), rss=rss, gcv=gcv, N=problem.N,
                     converged=converged, histories=tuple(histories) if settings.record_history else ())


def solve_at(problem, mu, alpha0=None, settings=None):
    """Lasso solution of ``problem`` at a single ``mu``, optionally warm-started."""
    G, c = problem.normal_equations()
    alpha, _, _ = coordinate_descent(G, c, mu, alpha0, settings)
    return alpha


def select_gcv(path):
    """
    Pick the GCV-optimal solution of a path.

    Returns
    -------
    mu1_star : float
    alpha_star : ndarray
        Ties go to the larger mu1 (sparser solution); when every score is
        infinite the sparsest solution is returned.
    """
    i = path.best_index
    return float(path.mu1_grid[i]), path.alphas[i].copy()


def threshold_count(prop, D):
    """``ceil(prop * D)``, robust to rounding in ``prop * D``."""
    return int(math.ceil(prop * D - 1e-9))


def threshold_solutions(path, prop):
    """
    Near-sparse and near-dense solutions at sparsity proportion ``prop``.

    With ``c = ceil(prop * D)``: ``alpha_plus`` is the last solution, scanning
    from mu_max downward, before the first one with more than ``c`` nonzeros;
    ``alpha_minus`` is the first solution, scanning from the dense end, with at
    least ``c`` zeros.

    Parameters
    ----------
    path : LassoPath
    prop : float
        Proportion in ``(0, 1]``; values above 1 are treated as 1.

    Returns
    -------
    alpha_plus, alpha_minus : ndarray
    D1 : frozenset of int
        Strong non-zeros ``{k : alpha_minus[k] != 0}``.
    D2 : frozenset of int
        Strong zeros ``{k : alpha_plus[k] == 0}``.

    Examples
    --------
    For a path over D = 20 intervals with nonzero counts ``[0, 1, 3, 10]`` and
    ``prop = 0.05``, ``alpha_plus`` is the solution with one nonzero and D2
    holds its 19 zero positions.
    """
    if not prop > 0:
        raise InvalidArgument(f"threshold_solutions: prop must be positive, got {prop}.")
    D = path.D
    c = threshold_count(min(prop, 1.0), D)

    over = np.flatnonzero(path.nnz > c)
    plus = path.G - 1 if over.size == 0 else max(int(over[0]) - 1, 0)

    zeros = D - path.nnz
    enough = np.flatnonzero(zeros >= c)
    minus = int(enough[-1]) if enough.size else 0

    alpha_plus = path.alphas[plus].copy()
    alpha_minus = path.alphas[minus].copy()
    D1 = frozenset(np.flatnonzero(alpha_minus != 0).tolist())
    D2 = frozenset(np.flatnonzero(alpha_plus == 0).tolist())
    return alpha_plus, alpha_minus, D1, D2
