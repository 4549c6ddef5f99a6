from dataclasses import dataclass

import numpy as np

from src.system import InvalidArgument, InvalidData


@dataclass(frozen=True, eq=False)
class SparseProblem:
    """
    Interval-sparse least squares in the shrinkage coefficients.

    The target stacks, for every direction ``j``, the slice-mean projections
    of the n observations; design column ``k`` stacks the partial scores of
    the curves restricted to interval ``k``.

    Attributes
    ----------
    target : ndarray
        Stacked projections, shape (d*n,).
    design : ndarray
        Interval design, shape (d*n, D).
    partition : IntervalPartition
        The intervals defining the design columns.
    fit : RidgeFit
        The ridge fit whose directions are shrunk.
    """
    target: np.ndarray
    design: np.ndarray
    partition: object
    fit: object

    @property
    def N(self) -> int:
        """Number of stacked rows ``d * n``."""
        return self.target.size

    @property
    def D(self) -> int:
        return self.design.shape[1]

    def normal_equations(self):
        """``(design^T design / N, design^T target / N)``."""
        N = self.N
        return self.design.T @ self.design / N, self.design.T @ self.target / N


def projection_target(fit, slices):
    """
    Slice-mean projections ``(m_h(i) - m)^T a_j`` stacked direction by direction.

    Parameters
    ----------
    fit : RidgeFit
        Provides ``C[j, h] = a_j^T (m_h - m)``.
    slices : SliceAssignment
        Slice of every observation.

    Returns
    -------
    ndarray
        Shape (d*n,); entry ``j*n + i`` is ``C[j, h(i)]``.
    """
    if slices.H != fit.C.shape[1]:
        raise InvalidArgument(f"projection_target: fit has {fit.C.shape[1]} slices, assignment has {slices.H}.")
    return fit.C[:, slices.slice_of - 1].ravel()


def interval_design(X, fit, partition):
    """
    Interval design matrix ``[X Delta(a_1); ...; X Delta(a_d)]``.

    Parameters
    ----------
    X : array_like
        Curves, shape (n, p); used as given (center it to match a centered target).
    fit : RidgeFit
        Directions ``a_j`` as columns of ``fit.A``.
    partition : IntervalPartition
        D intervals covering the p grid points.

    Returns
    -------
    ndarray
        Shape (d*n, D); block j, column k is ``sum_{l in tau_k} x_l a_jl``.

    Examples
    --------
    With singleton intervals column k of block j is ``x_k * a_jk``; with a
    single interval the block is the full score ``X a_j``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    A = fit.A
    if X.shape[1] != A.shape[0] or partition.p != A.shape[0]:
        raise InvalidArgument(f"interval_design: X has {X.shape[1]} columns, A has {A.shape[0]} rows, "
                              f"partition covers {partition.p} points.")
    blocks = [np.add.reduceat(X * A[:, j], partition.starts, axis=1) for j in range(A.shape[1])]
    design = np.vstack(blocks)
    if not np.all(np.isfinite(design)):
        raise InvalidData("interval_design: non-finite entries.")
    return design


def build_problem(X, fit, slices, partition):
    """
    Sparse problem of a sample: centered design and slice-mean target.

    The curves are centered by their own grand mean, which puts the design on
    the same footing as the centered target ``(m_h - m)^T a_j``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Xc = X - X.mean(axis=0)
    return SparseProblem(target=projection_target(fit, slices), design=interval_design(Xc, fit, partition),
                         partition=partition, fit=fit)
