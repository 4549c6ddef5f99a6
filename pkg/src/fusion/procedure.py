import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from tabulate import tabulate

from src.containers import IntervalPartition
from src.fusion.merge import merge_step
from src.fusion.validation import cv_model_error
from src.sir import assign_folds, make_slices
from src.sparse import (LassoSettings, active_intervals, build_problem, lasso_path, select_gcv,
                        sparse_directions, threshold_solutions)
from src.system import InvalidArgument

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FusionConfig:
    """
    Settings of the interval fusion procedure.

    Attributes
    ----------
    P0 : float
        Initial sparsity proportion, also its increment (default 0.05).
    grid_size, eps_ratio : int, float
        Regularization path settings.
    cv_folds : int
        Folds of the model-selection cross-validation (default 10).
    max_iterations : int, optional
        Safeguard on fusion iterations; defaults to ``2 p``.
    seed : int
        Seed of the fold assignment.
    """
    P0: float = 0.05
    grid_size: int = 100
    eps_ratio: float = 1e-3
    cv_folds: int = 10
    max_iterations: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.P0 <= 1:
            raise InvalidArgument(f"FusionConfig: P0 must be in (0, 1], got {self.P0}.")
        if self.cv_folds < 2:
            raise InvalidArgument(f"FusionConfig: cv_folds must be >= 2, got {self.cv_folds}.")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidArgument(f"FusionConfig: max_iterations must be >= 1, got {self.max_iterations}.")
        # validates grid_size and eps_ratio
        self.lasso_settings()

    def lasso_settings(self):
        return LassoSettings(grid_size=self.grid_size, eps_ratio=self.eps_ratio)


@dataclass(frozen=True, eq=False)
class ModelRecord:
    """
    One candidate model of the fusion trace.

    Attributes
    ----------
    partition : IntervalPartition
    alpha_star : ndarray
        GCV-optimal shrinkage coefficients, one per interval.
    mu1_star : float
    cv_error : float
    iteration : int
    proportion : float
        Sparsity proportion in force when the record was produced.
    appended : bool
        Whole-domain model added after a stalled fusion; kept in the trace
        but never selected by CV.
    """
    partition: IntervalPartition
    alpha_star: np.ndarray
    mu1_star: float
    cv_error: float
    iteration: int
    proportion: float = 0.0
    appended: bool = False

    @property
    def D(self) -> int:
        return self.partition.D

    def directions(self, fit):
        """Shrunk, re-orthonormalized directions of this model."""
        return sparse_directions(fit, self.alpha_star, self.partition)

    def active(self):
        """Grid index ranges of consecutive intervals with nonzero coefficients."""
        return active_intervals(self.partition, self.alpha_star)


@dataclass(frozen=True, eq=False)
class ModelCollection:
    """
    Trace of the fusion procedure: one record per iteration, D strictly decreasing.

    Attributes
    ----------
    records : tuple of ModelRecord
    selected : int
        Index of the record with the smallest CV error among the records
        that are not ``appended``.
    fit : RidgeFit
        The ridge fit whose directions all records shrink.
    H : int
    truncated : bool
        The iteration safeguard stopped the loop before a single interval remained.
    stalled : bool
        No merge was possible even at proportion 1; the single-interval model
        was appended to the trace and excluded from selection.
    """
    records: tuple
    selected: int
    fit: object
    H: int
    truncated: bool = False
    stalled: bool = False

    @property
    def selected_record(self) -> ModelRecord:
        return self.records[self.selected]

    @property
    def baseline(self) -> ModelRecord:
        """The pointwise sparse model on singleton intervals (first record)."""
        return self.records[0]

    def trace_frame(self):
        """Plot-ready trace: iteration, D, mu1_star, cv_error, selected, appended."""
        return pd.DataFrame({
            "iteration": [r.iteration for r in self.records],
            "D": [r.D for r in self.records],
            "mu1_star": [r.mu1_star for r in self.records],
            "cv_error": [r.cv_error for r in self.records],
            "selected": [int(i == self.selected) for i in range(len(self.records))],
            "appended": [int(r.appended) for r in self.records],
        })

    def table(self):
        rows = [(r.iteration, r.D, int(np.count_nonzero(r.alpha_star)), r.mu1_star, r.cv_error,
                 "*" if i == self.selected else "") for i, r in enumerate(self.records)]
        return tabulate(rows, headers=("Iteration", "D", "Nonzero", "mu1*", "CV error", "Selected"),
                        tablefmt='orgtbl')


def _record(X, y, fit, slices, partition, config, fold_of, iteration, proportion, appended=False):
    settings = config.lasso_settings()
    path = lasso_path(build_problem(X, fit, slices, partition), settings)
    mu1, alpha = select_gcv(path)
    error = cv_model_error(X, y, fit, partition, mu1, fold_of, alpha0=alpha, settings=settings)
    record = ModelRecord(partition=partition, alpha_star=alpha, mu1_star=mu1, cv_error=error,
                         iteration=iteration, proportion=proportion, appended=appended)
    logger.info("fusion iteration %d: D=%d, nonzero=%d, mu1*=%.3e, cv=%.5g",
                iteration, partition.D, np.count_nonzero(alpha), mu1, error)
    return record, path


def _select(records):
    errors = np.array([np.inf if r.appended else r.cv_error for r in records])
    return int(np.argmin(errors))


def standard_sparse(X, y, fit, grid, config=None, slices=None):
    """
    Pointwise sparse model: singleton intervals, one path, GCV choice of mu1.

    Returns
    -------
    ModelRecord
        The same model as the first record of :func:`run_fusion`.
    """
    config = FusionConfig() if config is None else config
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    slices = make_slices(y, fit.C.shape[1]) if slices is None else slices
    fold_of = assign_folds(slices, config.cv_folds, config.seed)
    record, _ = _record(X, y, fit, slices, IntervalPartition.singletons(grid), config, fold_of, 0, config.P0)
    return record


def run_fusion(X, y, fit, config=None, grid=None, slices=None):
    """
    Interval fusion: from singleton intervals down to a single interval.

    Every iteration solves the regularization path on the current partition,
    stores the GCV-optimal model with its CV error, extracts strong non-zeros
    (nonzero in both the near-sparse and the near-dense solution) and strong
    zeros (zero in both), and fuses intervals by the neighbor and squeeze
    rules. When nothing fuses, the proportion grows by ``P0`` and the same
    path is scanned again.

    Parameters
    ----------
    X, y : array_like
        Sample used for the ridge fit.
    fit : RidgeFit
    config : FusionConfig, optional
    grid : array_like, optional
        Evaluation grid (default: ``0, 1, ..., p-1``).
    slices : SliceAssignment, optional
        Slices of ``y`` used for ``fit``; recomputed with the fit's H if omitted.

    Returns
    -------
    ModelCollection
        Flagged ``truncated`` when ``max_iterations`` stops the loop and
        ``stalled`` when no fusion is possible at proportion 1.
    """
    config = FusionConfig() if config is None else config
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    p = X.shape[1]
    grid = np.arange(p, dtype=float) if grid is None else np.asarray(grid, dtype=float)
    H = fit.C.shape[1]
    slices = make_slices(y, H) if slices is None else slices
    fold_of = assign_folds(slices, config.cv_folds, config.seed)
    max_iterations = 2 * p if config.max_iterations is None else config.max_iterations

    partition = IntervalPartition.singletons(grid)
    P = config.P0
    records = []
    truncated = stalled = False

    for iteration in range(max_iterations):
        record, path = _record(X, y, fit, slices, partition, config, fold_of, iteration, P)
        records.append(record)
        if partition.D == 1:
            break

        merged = partition
        while True:
            _, _, D1, D2 = threshold_solutions(path, P)
            merged = merge_step(partition, D1 - D2, D2 - D1)
            if merged.D < partition.D or P >= 1.0:
                break
            P = min(P + config.P0, 1.0)
            logger.debug("fusion iteration %d: no merge, proportion raised to %.3f", iteration, P)

        if merged.D == partition.D:
            stalled = True
            msg = (f"run_fusion: no merge possible at proportion 1 with D={partition.D}; "
                   "single interval appended outside CV selection.")
            logger.warning(msg)
            warnings.warn(msg, RuntimeWarning)
            whole = IntervalPartition.whole(grid)
            record, _ = _record(X, y, fit, slices, whole, config, fold_of, iteration + 1, P, appended=True)
            records.append(record)
            break
        partition = merged
    else:
        truncated = True
        msg = f"run_fusion: stopped after {max_iterations} iterations with D={records[-1].D}."
        logger.warning(msg)
        warnings.warn(msg, RuntimeWarning)

    selected = _select(records)
    logger.info("run_fusion: %d models, selected iteration %d (D=%d)",
                len(records), records[selected].iteration, records[selected].D)
    return ModelCollection(records=tuple(records), selected=selected, fit=fit, H=H,
                           truncated=truncated, stalled=stalled)
