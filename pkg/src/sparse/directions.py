import logging
import warnings
from dataclasses import dataclass

import numpy as np

from src.system import InvalidArgument, InvalidData

logger = logging.getLogger(__name__)

ZERO_NORM = 1e-10


@dataclass(frozen=True, eq=False)
class SparseDirections:
    """
    EDR directions shrunk interval by interval and re-orthonormalized.

    Attributes
    ----------
    A_sparse : ndarray
        Retained directions, shape (p, d_kept).
    alpha : ndarray
        Shrinkage coefficient of every interval, shape (D,).
    support : frozenset of int
        Intervals with a nonzero coefficient.
    dropped : tuple of int
        Original direction indices that vanished after shrinkage.
    empty_model : bool
        True when every direction vanished.
    """
    A_sparse: np.ndarray
    alpha: np.ndarray
    support: frozenset
    dropped: tuple = ()
    empty_model: bool = False


def sparse_directions(fit, alpha, partition, metric_ridge=None):
    """
    Apply interval shrinkage to the EDR directions and orthonormalize them.

    Every entry of direction ``j`` on interval ``k`` is multiplied by
    ``alpha[k]``; the shrunk columns are then orthonormalized by Gram-Schmidt
    under the inner product of ``Sigma + metric_ridge I``. Columns whose norm
    falls below 1e-10 are dropped.

    Parameters
    ----------
    fit : RidgeFit
    alpha : array_like
        One coefficient per interval of ``partition``.
    partition : IntervalPartition
    metric_ridge : float, optional
        Ridge of the orthonormalization metric; defaults to ``fit.mu2``.

    Returns
    -------
    SparseDirections

    Notes
    -----
    - Rows of intervals with ``alpha[k] == 0`` stay exactly zero in every column
    """
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.size != partition.D:
        raise InvalidArgument(f"sparse_directions: {alpha.size} coefficients for {partition.D} intervals.")
    if not np.all(np.isfinite(alpha)):
        raise InvalidData("sparse_directions: non-finite coefficients.")
    ridge = fit.mu2 if metric_ridge is None else metric_ridge
    M = fit.moments.sigma_hat + ridge * np.eye(fit.moments.p)

    shrunk = fit.A * alpha[partition.membership][:, None]
    kept, dropped = [], []
    for j in range(shrunk.shape[1]):
        v = shrunk[:, j].copy()
        for q in kept:
            v -= (q @ M @ v) * q
        norm = np.sqrt(max(float(v @ M @ v), 0.0))
        if norm < ZERO_NORM:
            dropped.append(j)
            continue
        kept.append(v / norm)

    support = frozenset(np.flatnonzero(alpha).tolist())
    A_sparse = np.column_stack(kept) if kept else np.zeros((fit.moments.p, 0))
    empty = not kept
    if dropped:
        msg = (f"sparse_directions: all {len(dropped)} directions vanished (empty model)." if empty
               else f"sparse_directions: directions {dropped} vanished after shrinkage and were dropped.")
        logger.warning(msg)
        warnings.warn(msg, RuntimeWarning)
    return SparseDirections(A_sparse=A_sparse, alpha=alpha, support=support, dropped=tuple(dropped),
                            empty_model=empty)


def active_intervals(partition, alpha):
    """
    Maximal runs of consecutive intervals with a nonzero coefficient.

    Parameters
    ----------
    partition : IntervalPartition
    alpha : array_like
        One coefficient per interval.

    Returns
    -------
    ndarray of int
        Inclusive grid index ranges ``[lo, hi]``, shape (m, 2); index
        ``partition.grid`` with it to get ``[t_lo, t_hi]``.

    Examples
    --------
    Coefficients ``[0, 1.2, 0.4, 0, 2.0]`` on five singletons give the ranges
    ``[[1, 2], [4, 4]]``.
    """
    alpha = np.asarray(alpha, dtype=float).ravel()
    nonzero = np.concatenate([[False], alpha != 0, [False]])
    edges = np.flatnonzero(np.diff(nonzero.astype(int)))
    first, last = edges[0::2], edges[1::2] - 1
    return np.column_stack([partition.starts[first], partition.stops[last]]).astype(int).reshape(-1, 2)
