import logging
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from src.sir.linalg import inv_sqrt, sym_eigen
from src.sir.moments import compute_moments
from src.sir.slicing import make_slices
from src.system import InvalidArgument, SingularMatrix

logger = logging.getLogger(__name__)

D_MAX_CAP = 10


@dataclass(frozen=True, eq=False)
class RidgeFit:
    """
    Ridge-regularized SIR estimate.

    Attributes
    ----------
    A : ndarray
        EDR basis, shape (p, d); columns are (Sigma + mu2 I)-orthonormal.
    C : ndarray
        Slice coefficients ``C_h = A^T (m_h - m)``, shape (d, H).
    eigenvalues : ndarray
        Leading eigenvalues, nonincreasing, shape (d,).
    mu2 : float
        Ridge parameter.
    moments : MomentSet
        The moments the fit was computed from.
    """
    A: np.ndarray
    C: np.ndarray
    eigenvalues: np.ndarray
    mu2: float
    moments: object

    @property
    def d(self) -> int:
        return self.A.shape[1]

    @property
    def metric(self) -> np.ndarray:
        """The ridge metric ``Sigma + mu2 I``."""
        return self.moments.sigma_hat + self.mu2 * np.eye(self.moments.p)

    def truncate(self, d):
        """
        Keep the first ``d`` directions.

        The leading columns do not depend on how many were computed, so a
        truncated fit equals a fit computed with ``d_max = d``.
        """
        if not 1 <= d <= self.d:
            raise InvalidArgument(f"RidgeFit.truncate: need 1 <= d <= {self.d}, got {d}.")
        return replace(self, A=self.A[:, :d], C=self.C[:d], eigenvalues=self.eigenvalues[:d])


def default_d_max(H):
    return max(1, min(H - 1, D_MAX_CAP))


def ridge_sir_fit(moments, mu2, d_max):
    """
    Solve the ridge SIR eigenproblem.

    With ``W = (Sigma + mu2 I)^{-1/2}`` the top ``d_max`` eigenvectors ``b_j``
    of ``W Gamma W`` give ``a_j = W b_j``; the slice coefficients then have the
    closed form ``C_h = A^T (m_h - m)``.

    Parameters
    ----------
    moments : MomentSet
        Sample moments.
    mu2 : float
        Ridge parameter; must be positive when ``p >= n``.
    d_max : int
        Number of directions, ``1 <= d_max <= min(p, H - 1)``.

    Returns
    -------
    RidgeFit

    Raises
    ------
    InvalidArgument
        On an out-of-range ``mu2`` or ``d_max``.
    SingularMatrix
        If ``Sigma + mu2 I`` is numerically singular.
    """
    p, H = moments.p, moments.H
    if mu2 < 0:
        raise InvalidArgument(f"ridge_sir_fit: mu2 must be nonnegative, got {mu2}.")
    if mu2 == 0 and p >= moments.n:
        raise InvalidArgument(f"ridge_sir_fit: mu2 must be positive when p >= n (p={p}, n={moments.n}).")
    if not 1 <= d_max <= min(p, H - 1):
        raise InvalidArgument(f"ridge_sir_fit: need 1 <= d_max <= min(p, H-1) = {min(p, H - 1)}, got {d_max}.")

    W = inv_sqrt(moments.sigma_hat, mu2)
    eig = sym_eigen(W @ moments.gamma_hat @ W)
    A = W @ eig.vectors[:, :d_max]
    C = A.T @ moments.centered_slice_means.T

    logger.debug("ridge_sir_fit: mu2=%g, d_max=%d, leading eigenvalue %.4g", mu2, d_max, eig.values[0])
    return RidgeFit(A=A, C=C, eigenvalues=eig.values[:d_max], mu2=float(mu2), moments=moments)


def edr_scores(X, A):
    """
    Projections ``X A`` of the curves on the EDR directions.

    Parameters
    ----------
    X : array_like
        Shape (n, p).
    A : array_like
        Shape (p, d).

    Returns
    -------
    ndarray
        Shape (n, d).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    if X.shape[1] != A.shape[0]:
        raise InvalidArgument(f"edr_scores: X has {X.shape[1]} columns, A has {A.shape[0]} rows.")
    return X @ A


def ridge_objective(moments, A, C, mu2):
    """
    Ridge SIR criterion, up to a constant independent of A and C.

    ``sum_h f_h C_h^T A^T (Sigma + mu2 I) A C_h - 2 sum_h f_h (m_h - m)^T A C_h``.
    For fixed A with (Sigma + mu2 I)-orthonormal columns it is minimized by
    ``C_h = A^T (m_h - m)``.
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    metric = moments.sigma_hat + mu2 * np.eye(moments.p)
    AC = A @ C
    quad = np.einsum("h,ph,pq,qh->", moments.freqs, AC, metric, AC)
    lin = np.einsum("h,hp,ph->", moments.freqs, moments.centered_slice_means, AC)
    return float(quad - 2.0 * lin)


def classical_sir(moments, d):
    """
    Standard SIR: leading solutions of ``Gamma a = lambda Sigma a``.

    Parameters
    ----------
    moments : MomentSet
        Sample moments with nonsingular covariance (``p < n``).
    d : int
        Number of directions.

    Returns
    -------
    RidgeFit
        With ``mu2 = 0``; columns of A are Sigma-orthonormal.

    Raises
    ------
    SingularMatrix
        If Sigma is not positive definite.
    """
    if not 1 <= d <= moments.p:
        raise InvalidArgument(f"classical_sir: need 1 <= d <= p, got {d}.")
    try:
        values, vectors = scipy.linalg.eigh(moments.gamma_hat, moments.sigma_hat)
    except scipy.linalg.LinAlgError as err:
        raise SingularMatrix(f"classical_sir: {err}") from None
    values, A = values[::-1][:d], vectors[:, ::-1][:, :d]
    C = A.T @ moments.centered_slice_means.T
    return RidgeFit(A=A, C=C, eigenvalues=values, mu2=0.0, moments=moments)


def fit_dataset(X, y, H, mu2, d_max=None):
    """Slice, compute moments and fit ridge SIR in one call."""
    slices = make_slices(y, H)
    moments = compute_moments(X, y, slices)
    d_max = default_d_max(H) if d_max is None else d_max
    return ridge_sir_fit(moments, mu2, min(d_max, moments.p)), slices
