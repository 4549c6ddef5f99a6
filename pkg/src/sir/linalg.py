import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from src.system import InvalidArgument, InvalidData, NumericalFailure, RankDeficient, SingularMatrix

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12
"""Eigenvalues closer than this are treated as a degenerate cluster."""

SINGULAR_TOL = 1e-12
"""Smallest admissible eigenvalue of a matrix that gets inverted."""

CONDITION_MAX = 1e12


@dataclass(frozen=True, eq=False)
class SymEigen:
    """
    Spectral decomposition of a symmetric matrix.

    Attributes
    ----------
    values : ndarray
        Eigenvalues in nonincreasing order.
    vectors : ndarray
        Orthonormal eigenvectors as columns, in the order of ``values``.
    """
    values: np.ndarray
    vectors: np.ndarray


def symmetrize(M):
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def sym_eigen(M):
    """
    Deterministic full eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    M : array_like
        Square matrix; symmetrized as ``(M + M^T) / 2`` first.

    Returns
    -------
    SymEigen
        Eigenvalues sorted nonincreasing. Each eigenvector has its
        largest-magnitude component positive, and eigenvectors of a degenerate
        cluster are ordered by the index of their first nonzero component.

    Raises
    ------
    InvalidData
        If ``M`` is not square or holds non-finite entries.
    NumericalFailure
        If the symmetric solver does not converge.

    Examples
    --------
    >>> e = sym_eigen([[2.0, 1.0], [1.0, 2.0]])
    >>> e.values
    array([3., 1.])
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidData(f"sym_eigen: expected a square matrix, got shape {M.shape}.")
    if not np.all(np.isfinite(M)):
        raise InvalidData("sym_eigen: non-finite entries.")

    try:
        values, vectors = scipy.linalg.eigh(symmetrize(M))
    except scipy.linalg.LinAlgError as err:
        raise NumericalFailure(f"sym_eigen: {err}") from None

    values, vectors = values[::-1], vectors[:, ::-1]

    # sign: largest-magnitude component positive
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors = vectors * signs

    order = np.arange(values.size)
    start = 0
    while start < values.size:
        stop = start + 1
        while stop < values.size and values[start] - values[stop] < TIE_TOL:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            first = np.argmax(np.abs(block) > TIE_TOL, axis=0)
            order[start:stop] = start + np.argsort(first, kind="stable")
        start = stop

    return SymEigen(values=values[order], vectors=vectors[:, order])


def inv_sqrt(M, ridge=0.0):
    """
    Inverse square root ``(M + ridge I)^{-1/2}`` of a symmetric PSD matrix.

    Parameters
    ----------
    M : array_like
        Symmetric positive semidefinite matrix.
    ridge : float, optional
        Nonnegative shift added to the diagonal.

    Returns
    -------
    ndarray
        Symmetric inverse square root.

    Raises
    ------
    SingularMatrix
        If the smallest ridged eigenvalue is not above 1e-12.

    Examples
    --------
    >>> inv_sqrt(np.diag([3.0, 0.0]), ridge=1.0)
    array([[0.5, 0. ],
           [0. , 1. ]])
    """
    if ridge < 0:
        raise InvalidArgument(f"inv_sqrt: ridge must be nonnegative, got {ridge}.")
    eig = sym_eigen(M)
    values = eig.values + ridge
    if values.min() <= SINGULAR_TOL:
        raise SingularMatrix(f"inv_sqrt: smallest ridged eigenvalue {values.min():.3e} <= {SINGULAR_TOL}.")
    W = (eig.vectors / np.sqrt(values)) @ eig.vectors.T
    return symmetrize(W)


def sqrt_pair(M):
    """``(M^{1/2}, M^{-1/2})`` of a symmetric positive definite matrix."""
    eig = sym_eigen(M)
    if eig.values.min() <= SINGULAR_TOL:
        raise SingularMatrix(f"sqrt_pair: smallest eigenvalue {eig.values.min():.3e} <= {SINGULAR_TOL}.")
    root = np.sqrt(eig.values)
    return (symmetrize((eig.vectors * root) @ eig.vectors.T),
            symmetrize((eig.vectors / root) @ eig.vectors.T))


def ridge_projector(A, metric):
    """
    M-orthogonal projector onto the column span of A.

    Computes ``Pi = A (A^T M A)^{-1} A^T M``, which is idempotent and
    M-self-adjoint (``M Pi = Pi^T M``), with trace equal to the rank of A.

    Parameters
    ----------
    A : array_like
        Basis, shape (p, d).
    metric : array_like
        Symmetric positive definite matrix M, shape (p, p).

    Returns
    -------
    ndarray
        Projector, shape (p, p).

    Raises
    ------
    RankDeficient
        If ``A^T M A`` is singular (condition number above 1e12) or A is empty.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    M = symmetrize(metric)
    if A.shape[0] != M.shape[0]:
        raise InvalidArgument(f"ridge_projector: A has {A.shape[0]} rows, metric is {M.shape}.")
    if A.shape[1] == 0:
        raise RankDeficient("ridge_projector: empty basis.")

    G = symmetrize(A.T @ M @ A)
    if not np.all(np.isfinite(G)) or np.linalg.cond(G) > CONDITION_MAX:
        raise RankDeficient("ridge_projector: A^T M A is singular.")
    return A @ scipy.linalg.solve(G, A.T @ M, assume_a="pos")


def projector_gap(Pi, Pi_hat, metric=None):
    """
    Half the squared M-Frobenius distance between two M-orthogonal projectors.

    ``0.5 * ||M^{1/2} (Pi - Pi_hat) M^{-1/2}||_F^2``; for two projectors of the
    same rank d under the same metric this equals ``d - Tr(Pi Pi_hat)``.

    Parameters
    ----------
    Pi, Pi_hat : array_like
        Projectors, shape (p, p).
    metric : array_like, optional
        The common metric M; identity if omitted.

    Returns
    -------
    float
    """
    diff = np.asarray(Pi, dtype=float) - np.asarray(Pi_hat, dtype=float)
    if metric is not None:
        root, inv_root = sqrt_pair(metric)
        diff = root @ diff @ inv_root
    return 0.5 * float(np.sum(diff ** 2))


def subspace_distance(A, B):
    """Frobenius distance between the Euclidean orthogonal projectors on span(A) and span(B)."""
    QA = scipy.linalg.orth(np.asarray(A, dtype=float))
    QB = scipy.linalg.orth(np.asarray(B, dtype=float))
    return float(np.linalg.norm(QA @ QA.T - QB @ QB.T))
