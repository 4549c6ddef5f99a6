import logging

import numpy as np

from src.sir import assign_folds, compute_moments, fold_rows, make_slices, ridge_sir_fit, slices_for_fold
from src.sparse import SparseProblem, interval_design, solve_at
from src.system import InvalidArgument, ordered_map

logger = logging.getLogger(__name__)


def fold_fit(X, y, fit, train):
    """
    Ridge fit, slices and moments of the training rows of one fold.

    Uses the global fit's ``mu2`` and ``d`` only; ``d`` is capped when the
    fold has fewer slices than ``d + 1``.

    Returns
    -------
    tuple of (RidgeFit, SliceAssignment, MomentSet)
    """
    H = fit.C.shape[1]
    slices = slices_for_fold(y[train], H, where="cv_model_error")
    moments = compute_moments(X[train], y[train], slices)
    d = min(fit.d, moments.H - 1, moments.p)
    if d < 1:
        raise InvalidArgument(f"cv_model_error: a fold with {slices.n} training rows cannot hold {H} slices.")
    return ridge_sir_fit(moments, fit.mu2, d), slices, moments


def _fold_error(X, y, fit, partition, mu1, alpha0, settings, train, test):
    train_fit, slices, moments = fold_fit(X, y, fit, train)
    C = train_fit.C

    target = C[:, slices.slice_of - 1].ravel()
    design = interval_design(X[train] - moments.grand_mean, train_fit, partition)
    alpha = solve_at(SparseProblem(target=target, design=design, partition=partition, fit=train_fit),
                     mu1, alpha0, settings)

    # held-out rows: training slice ranges, training slice means, training centering
    test_target = C[:, slices.route(y[test]) - 1].ravel()
    test_design = interval_design(X[test] - moments.grand_mean, train_fit, partition)
    residual = test_target - test_design @ alpha
    return float(residual @ residual) / test_target.size


def cv_fold_errors(X, y, fit, partition, mu1_star, folds, alpha0=None, settings=None, seed=0):
    """
    Held-out error of every fold; see :func:`cv_model_error`.

    Returns
    -------
    ndarray
        One error per fold, in fold order.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if np.ndim(folds) == 0:
        if folds < 2:
            raise InvalidArgument(f"cv_model_error: folds must be >= 2, got {folds}.")
        fold_of = assign_folds(make_slices(y, fit.C.shape[1]), int(folds), seed)
    else:
        fold_of = np.asarray(folds, dtype=int)
    L = int(fold_of.max()) + 1

    def one(l):
        train, test = fold_rows(fold_of, l, L)
        return _fold_error(X, y, fit, partition, mu1_star, alpha0, settings, train, test)

    return np.array(ordered_map(one, range(L)))


def cv_model_error(X, y, fit, partition, mu1_star, folds, alpha0=None, settings=None, seed=0):
    """
    K-fold cross-validated error of an interval model at fixed mu1.

    For each fold the training rows are re-sliced with the fit's H (merging
    slices when there are fewer training rows than slices), the ridge
    directions are refitted on the training rows with the fit's ``mu2`` and
    ``d``, the target and the design are rebuilt from them, and the Lasso is
    solved at ``mu1_star``. Held-out rows never enter the directions that
    score them. Every held-out row is assigned to the training slice whose
    response range contains it; its target is that slice's mean projection
    and its curve is centered by the training mean. The fold error is
    ``||P_test - Delta_test alpha||^2 / (d n_test)``.

    Parameters
    ----------
    X, y : array_like
        Sample.
    fit : RidgeFit
        Global ridge fit; supplies ``mu2``, ``d`` and ``H``.
    partition : IntervalPartition
    mu1_star : float
        Regularization value.
    folds : int or array_like
        Number of folds (``>= 2``, stratified by slice and seeded) or an
        explicit fold index per row.
    alpha0 : array_like, optional
        Warm start of the fold solves.
    settings : LassoSettings, optional
    seed : int, optional
        Seed of the fold assignment when ``folds`` is a count.

    Returns
    -------
    float
        Mean fold error.
    """
    return float(np.mean(cv_fold_errors(X, y, fit, partition, mu1_star, folds, alpha0, settings, seed)))
