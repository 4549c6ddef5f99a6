import logging
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

from src.system import InvalidArgument, InvalidData, all_finite

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SliceAssignment:
    """
    Partition of the observations into H consecutive slices of the response.

    Attributes
    ----------
    slice_of : ndarray of int
        Slice label in ``1..H`` of every observation, shape (n,).
    H : int
        Number of slices.
    counts : ndarray of int
        Number of observations per slice, shape (H,).
    upper : ndarray of float
        Largest response value of every slice, shape (H,). Used to route new
        responses to the slice whose y-range contains them.
    """
    slice_of: np.ndarray
    H: int
    counts: np.ndarray
    upper: np.ndarray

    @property
    def n(self) -> int:
        return self.slice_of.size

    def members(self, h):
        """Row indices of slice ``h`` (1-based label)."""
        return np.flatnonzero(self.slice_of == h)

    def route(self, y_new):
        """
        Slice labels of new responses, from the slice y-ranges.

        A value goes to the first slice whose largest response is at least the
        value; values above every slice go to slice H.
        """
        idx = np.searchsorted(self.upper, np.asarray(y_new, dtype=float), side="left")
        return np.minimum(idx, self.H - 1) + 1


def make_slices(y, H):
    """
    Slice the response into H consecutive slices of (almost) equal counts.

    Observations are ranked by a stable sort of ``y`` so tied responses keep
    the order of their original index; the first ranks go to slice 1. Slice
    counts differ by at most one, larger slices first.

    Parameters
    ----------
    y : array_like
        Response vector, shape (n,).
    H : int
        Number of slices, ``2 <= H <= n``.

    Returns
    -------
    SliceAssignment

    Raises
    ------
    InvalidArgument
        If ``H < 2`` or ``H > n``.
    InvalidData
        If ``y`` holds non-finite values.

    Examples
    --------
    >>> make_slices([3.0, 1.0, 2.0], 3).slice_of
    array([3, 1, 2])
    """
    y = np.asarray(y, dtype=float).ravel()
    if not all_finite(y):
        raise InvalidData("make_slices: the response has non-finite entries.")
    if not 2 <= H <= y.size:
        raise InvalidArgument(f"make_slices: need 2 <= H <= n, got H={H}, n={y.size}.")
    return _equal_count_slices(y, H)


def _equal_count_slices(y, H):
    order = np.argsort(y, kind="stable")
    slice_of = np.empty(y.size, dtype=int)
    for h, rows in enumerate(np.array_split(order, H), start=1):
        slice_of[rows] = h
    counts = np.bincount(slice_of, minlength=H + 1)[1:]
    upper = np.array([y[rows].max() for rows in np.array_split(order, H)])
    return SliceAssignment(slice_of=slice_of, H=H, counts=counts, upper=upper)


def slices_for_fold(y, H, where=""):
    """
    Slice a training subsample, reducing H when it has fewer than H rows.

    Parameters
    ----------
    y : array_like
        Training responses.
    H : int
        Requested slice count.
    where : str, optional
        Context for the warning message.

    Returns
    -------
    SliceAssignment
        With ``min(H, n)`` slices (and at least one).
    """
    y = np.asarray(y, dtype=float).ravel()
    H_eff = min(H, y.size)
    if H_eff < H:
        msg = f"{where}: {y.size} training rows for H={H}; slices merged to H={H_eff}."
        logger.warning(msg)
        warnings.warn(msg, RuntimeWarning)
    return _equal_count_slices(y, max(H_eff, 1))


def assign_folds(slices, folds, seed=0):
    """
    Assign every observation to one of ``folds`` folds, stratified by slice.

    Parameters
    ----------
    slices : SliceAssignment
        Stratification labels.
    folds : int
        Number of folds, ``>= 2`` (``1`` puts everything in fold 0).
    seed : int, optional
        Seed of the shuffling.

    Returns
    -------
    ndarray of int
        Fold index in ``0..folds-1`` of every observation, shape (n,).

    Notes
    -----
    - Every slice is spread across folds as evenly as its size allows; when no
      slice has as many members as there are folds, plain shuffled K-fold is used
    """
    n = slices.n
    if folds < 1 or folds > n:
        raise InvalidArgument(f"assign_folds: need 1 <= folds <= n, got folds={folds}, n={n}.")
    fold_of = np.zeros(n, dtype=int)
    if folds == 1:
        return fold_of

    if np.max(slices.counts) >= folds:
        splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
        with warnings.catch_warnings():
            # small slices are expected; they just end up in fewer folds
            warnings.simplefilter("ignore", UserWarning)
            splits = list(splitter.split(np.zeros(n), slices.slice_of))
    else:
        splits = list(KFold(n_splits=folds, shuffle=True, random_state=seed).split(np.zeros(n)))

    for l, (_, test) in enumerate(splits):
        fold_of[test] = l
    return fold_of


def fold_rows(fold_of, l, folds):
    """(train, test) row indices of fold ``l``; with one fold both are every row."""
    if folds == 1:
        rows = np.arange(fold_of.size)
        return rows, rows
    return np.flatnonzero(fold_of != l), np.flatnonzero(fold_of == l)
