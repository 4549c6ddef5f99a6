import logging
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from tabulate import tabulate

from src.system import InvalidArgument
from src.tuning.criteria import TuneGrid, criteria_tables, elbow

logger = logging.getLogger(__name__)

MAX_ROUNDS = 20


@dataclass(frozen=True, eq=False)
class TuneResult:
    """
    Outcome of the joint choice of mu2 and d.

    Attributes
    ----------
    mu2_values : tuple of float
        Grid of ridge parameters, one row of the tables each.
    cv_err : ndarray
        CV error, shape (len(mu2_values), d0).
    r_hat : ndarray
        Projector criterion, shape (len(mu2_values), d0).
    mu2_star : float
    d_star : int
    trace : tuple of (float, int)
        Iterates ``(mu2*, d*)`` of the alternation, one per round.
    stabilized : bool
        False when the alternation hit the round cap without repeating.
    """
    mu2_values: tuple
    cv_err: np.ndarray
    r_hat: np.ndarray
    mu2_star: float
    d_star: int
    trace: tuple
    stabilized: bool = True

    @property
    def d0(self) -> int:
        return self.cv_err.shape[1]

    def _frame(self, values):
        return pd.DataFrame(values, index=pd.Index(self.mu2_values, name="mu2"),
                            columns=[f"d{d}" for d in range(1, self.d0 + 1)]).reset_index()

    def cv_err_frame(self):
        """Plot-ready CV error table: one row per mu2, one column per d."""
        return self._frame(self.cv_err)

    def r_hat_frame(self):
        """Plot-ready R-hat table: one row per mu2, one column per d."""
        return self._frame(self.r_hat)

    def table(self):
        rows = []
        for i, mu2 in enumerate(self.mu2_values):
            rows.append([mu2, self.cv_err[i, self.d_star - 1], elbow(self.r_hat[i]) if self.d0 > 1 else 1,
                         "*" if mu2 == self.mu2_star else ""])
        return tabulate(rows, headers=("mu2", f"CV error (d={self.d_star})", "Elbow d", "Selected"),
                        tablefmt='orgtbl')


def stabilize(cv_err, r_hat, mu2_values, max_rounds=MAX_ROUNDS):
    """
    Alternate ``mu2* = argmin_mu2 CV(mu2, d*)`` and ``d* = elbow(R_mu2*)``.

    Starts from ``d* = d0`` and stops when an iterate repeats the previous
    one, or after ``max_rounds`` rounds.

    Parameters
    ----------
    cv_err, r_hat : array_like
        Tables of shape (len(mu2_values), d0).
    mu2_values : sequence of float
    max_rounds : int, optional

    Returns
    -------
    mu2_star : float
    d_star : int
    trace : tuple of (float, int)
    stabilized : bool
    """
    cv_err = np.asarray(cv_err, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    if cv_err.shape != r_hat.shape or cv_err.shape[0] != len(mu2_values):
        raise InvalidArgument(f"stabilize: table shapes {cv_err.shape}, {r_hat.shape} do not match the grid.")

    d0 = cv_err.shape[1]
    d_star = d0
    previous = None
    trace = []
    for _ in range(max_rounds):
        i = int(np.argmin(cv_err[:, d_star - 1]))
        d_star = elbow(r_hat[i]) if d0 > 1 else 1
        current = (float(mu2_values[i]), d_star)
        if current == previous:
            return current[0], current[1], tuple(trace), True
        trace.append(current)
        previous = current
        logger.debug("stabilize: round %d, mu2*=%g, d*=%d", len(trace), *current)

    msg = f"stabilize: no repeated iterate after {max_rounds} rounds; last mu2*={previous[0]:g}, d*={previous[1]}."
    logger.warning(msg)
    warnings.warn(msg, RuntimeWarning)
    return previous[0], previous[1], tuple(trace), False


def joint_tune(X, y, H, grid=None, folds=None):
    """
    Joint choice of the ridge parameter and the EDR dimension.

    A single fold pass fills the CV error and R-hat tables for every
    (mu2, d) of the grid; :func:`stabilize` then alternates between them.

    Parameters
    ----------
    X, y : array_like
        Sample.
    H : int
        Number of slices.
    grid : TuneGrid, optional
    folds : array_like, optional
        Explicit fold index per row.

    Returns
    -------
    TuneResult
    """
    grid = TuneGrid() if grid is None else grid
    cv_err, r_hat = criteria_tables(X, y, H, grid, folds)
    mu2_star, d_star, trace, stabilized = stabilize(cv_err, r_hat, grid.mu2_values)
    logger.info("joint_tune: mu2*=%g, d*=%d after %d round(s)", mu2_star, d_star, len(trace))
    return TuneResult(mu2_values=grid.mu2_values, cv_err=cv_err, r_hat=r_hat, mu2_star=mu2_star, d_star=d_star,
                      trace=trace, stabilized=stabilized)
