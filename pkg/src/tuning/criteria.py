import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from src.sir import (assign_folds, compute_moments, default_d_max, fold_rows, make_slices, ridge_projector,
                     ridge_sir_fit)
from src.system import InvalidArgument, RankDeficient, ordered_map

logger = logging.getLogger(__name__)

DEFAULT_MU2 = tuple(10.0 ** k for k in range(-2, 6))
EPS_REL = 1e-8


@dataclass(frozen=True)
class TuneGrid:
    """
    Search grid of the joint choice of mu2 and d.

    Attributes
    ----------
    mu2_values : tuple of float
        Candidate ridge parameters (default ``1e-2, 1e-1, ..., 1e5``).
    d0 : int, optional
        Largest dimension considered; defaults to ``min(H - 1, 10)``.
    folds : int
        Number of folds L.
    epsilon : float, optional
        Absolute ridge added to the fold covariance in the CV norm. When
        omitted, ``1e-8 * trace(Sigma_l) / p`` per fold.
    seed : int
        Seed of the fold assignment.
    """
    mu2_values: tuple = DEFAULT_MU2
    d0: Optional[int] = None
    folds: int = 10
    epsilon: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        values = np.asarray(self.mu2_values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidArgument("TuneGrid: mu2_values must be a nonempty sequence.")
        if np.any(~np.isfinite(values)) or np.any(values <= 0):
            raise InvalidArgument("TuneGrid: mu2_values must be positive.")
        object.__setattr__(self, "mu2_values", tuple(float(v) for v in values))
        if self.d0 is not None and self.d0 < 1:
            raise InvalidArgument(f"TuneGrid: d0 must be >= 1, got {self.d0}.")
        if self.folds < 2:
            raise InvalidArgument(f"TuneGrid: folds must be >= 2, got {self.folds}.")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InvalidArgument(f"TuneGrid: epsilon must be positive, got {self.epsilon}.")

    def resolve_d0(self, H, p):
        d0 = min(default_d_max(H), p) if self.d0 is None else self.d0
        if not 1 <= d0 <= min(H - 1, p):
            raise InvalidArgument(f"TuneGrid: need 1 <= d0 <= min(H-1, p) = {min(H - 1, p)}, got {d0}.")
        return d0


def _fold_array(y, H, folds, seed):
    if np.ndim(folds) == 0:
        return assign_folds(make_slices(y, H), int(folds), seed)
    fold_of = np.asarray(folds, dtype=int)
    if fold_of.shape != y.shape:
        raise InvalidArgument(f"tuning: fold array has shape {fold_of.shape}, expected {y.shape}.")
    return fold_of


def _check_folds(fold_of, H):
    L = int(fold_of.max()) + 1
    for l in range(L):
        train, _ = fold_rows(fold_of, l, L)
        if train.size < H:
            raise InvalidArgument(f"tuning: fold {l} leaves {train.size} observations for {H} slices.")
    return L


def fold_cv_errors(X_fold, y_fold, slices, fit, epsilon=None):
    """
    CV errors of one held-out fold for every leading dimension of ``fit``.

    Held-out rows are routed to the training slices by their response; with
    fold statistics ``f_h``, ``m_h``, ``m`` and ``S`` the error at dimension d is
    ``sum_h f_h || (m_h - m) - S A_d C_h ||^2`` in the ``(S + eps I)^{-1}`` norm.
    Slices without held-out rows get weight zero.

    Returns
    -------
    errors : ndarray
        Shape (fit.d,).
    empty : int
        Number of training slices that received no held-out row.
    """
    n_l, p = X_fold.shape
    H = slices.H
    labels = slices.route(y_fold) - 1
    counts = np.bincount(labels, minlength=H)
    freqs = counts / n_l

    mean = X_fold.mean(axis=0)
    sums = np.zeros((H, p))
    np.add.at(sums, labels, X_fold)
    occupied = counts > 0
    centered = np.zeros((H, p))
    centered[occupied] = sums[occupied] / counts[occupied, None] - mean

    Xc = X_fold - mean
    sigma = Xc.T @ Xc / n_l
    if epsilon is None:
        epsilon = EPS_REL * np.trace(sigma) / p
        if not epsilon > 0:
            epsilon = EPS_REL
    factor = scipy.linalg.cho_factor(sigma + epsilon * np.eye(p))

    errors = np.empty(fit.d)
    for d in range(1, fit.d + 1):
        resid = centered - (sigma @ fit.A[:, :d] @ fit.C[:d]).T
        weighted = scipy.linalg.cho_solve(factor, resid.T)
        errors[d - 1] = float(np.sum(freqs * np.einsum("ph,hp->h", weighted, resid)))
    return errors, int(H - occupied.sum())


def projector_traces(fit, projectors):
    """``Tr(Pi_l(d) Pi(d))`` for every d, with ``Pi_l`` built from ``fit`` under its own metric."""
    metric = fit.metric
    return np.array([np.sum(ridge_projector(fit.A[:, :d], metric) * projectors[d - 1].T)
                     for d in range(1, len(projectors) + 1)])


def r_hat_value(fold_projectors, projector):
    """
    ``d - mean_l Tr(Pi_l Pi)`` for one dimension d.

    Parameters
    ----------
    fold_projectors : sequence of ndarray
        Leave-fold-out projectors.
    projector : ndarray
        Full-sample projector of rank d.
    """
    d = np.trace(projector)
    return float(round(d) - np.mean([np.sum(P * projector.T) for P in fold_projectors]))


def _full_projectors(X, y, H, mu2, d0):
    moments = compute_moments(X, y, make_slices(y, H))
    fit = ridge_sir_fit(moments, mu2, d0)
    return [ridge_projector(fit.A[:, :d], fit.metric) for d in range(1, d0 + 1)]


def _cell(X, y, H, mu2, d0, fold_of, l, L, projectors, epsilon):
    train, test = fold_rows(fold_of, l, L)
    slices = make_slices(y[train], H)
    fit = ridge_sir_fit(compute_moments(X[train], y[train], slices), mu2, d0)
    errors, empty = fold_cv_errors(X[test], y[test], slices, fit, epsilon)
    traces = None
    if projectors is not None:
        try:
            traces = projector_traces(fit, projectors)
        except RankDeficient as err:
            logger.warning("tuning: fold %d skipped for mu2=%g (%s)", l, mu2, err)
    return errors, traces, empty


def _r_hat(traces, d0, L, mu2):
    valid = [t for t in traces if t is not None]
    if 2 * len(valid) < L:
        raise RankDeficient(f"r_hat_curve: only {len(valid)} of {L} folds usable at mu2={mu2}.")
    return np.arange(1, d0 + 1) - np.mean(valid, axis=0)


def criteria_tables(X, y, H, grid=None, folds=None, with_r_hat=True):
    """
    One fold pass filling the CV error and R-hat tables.

    Parameters
    ----------
    X, y : array_like
        Sample.
    H : int
        Number of slices.
    grid : TuneGrid, optional
    folds : array_like, optional
        Explicit fold index per row, overriding ``grid.folds`` and ``grid.seed``.
        A single fold (all zeros) uses the whole sample for fitting and testing.
    with_r_hat : bool, optional
        Skip the projector criterion when False.

    Returns
    -------
    cv_err : ndarray
        Shape (len(mu2_values), d0).
    r_hat : ndarray or None
        Shape (len(mu2_values), d0).
    """
    grid = TuneGrid() if grid is None else grid
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    d0 = grid.resolve_d0(H, X.shape[1])
    fold_of = _fold_array(y, H, grid.folds if folds is None else folds, grid.seed)
    L = _check_folds(fold_of, H)
    mu2_values = grid.mu2_values

    full = ordered_map(lambda mu2: _full_projectors(X, y, H, mu2, d0), mu2_values) if with_r_hat \
        else [None] * len(mu2_values)
    cells = [(i, l) for i in range(len(mu2_values)) for l in range(L)]
    results = ordered_map(lambda c: _cell(X, y, H, mu2_values[c[0]], d0, fold_of, c[1], L, full[c[0]],
                                          grid.epsilon), cells)

    cv_err = np.zeros((len(mu2_values), d0))
    r_hat = np.zeros((len(mu2_values), d0)) if with_r_hat else None
    empty = 0
    for i, mu2 in enumerate(mu2_values):
        block = results[i * L:(i + 1) * L]
        cv_err[i] = np.mean([errors for errors, _, _ in block], axis=0)
        empty += sum(e for _, _, e in block)
        if with_r_hat:
            r_hat[i] = _r_hat([traces for _, traces, _ in block], d0, L, mu2)
        logger.debug("tuning: mu2=%g cv=%s", mu2, np.array2string(cv_err[i], precision=4))
    if empty:
        logger.warning("tuning: %d held-out slice(s) were empty and merged into their neighbors", empty)
    return cv_err, r_hat


def cv_error_grid(X, y, H, grid=None, folds=None):
    """
    L-fold CV error for every mu2 of the grid and every d up to d0.

    For each mu2 and fold, ridge SIR is fitted at d0 on the complement of
    the fold; the first d columns of A and rows of C are then scored against
    the fold's own slice statistics (see :func:`fold_cv_errors`). Errors are
    averaged over folds.

    Returns
    -------
    ndarray
        Shape (len(grid.mu2_values), d0).

    Raises
    ------
    InvalidArgument
        If a fold leaves fewer than H observations for fitting.
    """
    return criteria_tables(X, y, H, grid, folds, with_r_hat=False)[0]


def r_hat_curve(X, y, H, mu2, d0, folds=10, seed=0):
    """
    Projector criterion ``R(d) = d - (1/L) sum_l Tr(Pi_l(d) Pi(d))``.

    ``Pi_l(d)`` is the ridge projector on the first d leave-fold-out
    directions under the leave-fold-out metric, ``Pi(d)`` the same on the
    whole sample. Folds whose basis is rank deficient are skipped with a
    warning; at least half of the folds must remain.

    Parameters
    ----------
    X, y : array_like
    H : int
    mu2 : float
    d0 : int
    folds : int or array_like
        Fold count (stratified, seeded) or explicit fold index per row.
    seed : int, optional

    Returns
    -------
    ndarray
        Shape (d0,).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    fold_of = _fold_array(y, H, folds, seed)
    L = _check_folds(fold_of, H)
    projectors = _full_projectors(X, y, H, mu2, d0)

    def traces(l):
        train, _ = fold_rows(fold_of, l, L)
        fit = ridge_sir_fit(compute_moments(X[train], y[train], make_slices(y[train], H)), mu2, d0)
        try:
            return projector_traces(fit, projectors)
        except RankDeficient as err:
            logger.warning("r_hat_curve: fold %d skipped (%s)", l, err)
            return None

    return _r_hat(ordered_map(traces, range(L)), d0, L, mu2)


def elbow(r_curve):
    """
    Elbow of an increasing criterion curve.

    With increments ``delta_d = r(d+1) - r(d)``, returns the d maximizing
    ``delta_d - delta_{d+1}``: the dimension after which the growth collapses
    most. Ties go to the smallest d; a curve of length 2 gives 1.

    Examples
    --------
    >>> elbow([0.2, 0.9, 1.0, 1.05])
    1
    >>> elbow([0.1, 0.2, 0.9, 0.95])
    2
    """
    r = np.asarray(r_curve, dtype=float).ravel()
    if r.size < 2:
        raise InvalidArgument(f"elbow: need at least 2 values, got {r.size}.")
    if r.size == 2:
        return 1
    delta = np.diff(r)
    drops = delta[:-1] - delta[1:]
    return int(np.argmax(drops)) + 1
