from dataclasses import dataclass

import numpy as np

from src.system import InvalidArgument, InvalidData


@dataclass(frozen=True, eq=False)
class MomentSet:
    """
    Empirical inverse-regression moments of a sliced sample.

    Attributes
    ----------
    n : int
        Number of observations.
    grand_mean : ndarray
        Column mean of X, shape (p,).
    slice_means : ndarray
        Per-slice column means, shape (H, p).
    freqs : ndarray
        Slice frequencies ``n_h / n``, shape (H,).
    sigma_hat : ndarray
        Covariance with divisor n, shape (p, p).
    gamma_hat : ndarray
        Between-slice covariance ``sum_h f_h (m_h - m)(m_h - m)^T``, shape (p, p).
    """
    n: int
    grand_mean: np.ndarray
    slice_means: np.ndarray
    freqs: np.ndarray
    sigma_hat: np.ndarray
    gamma_hat: np.ndarray

    @property
    def p(self) -> int:
        return self.grand_mean.size

    @property
    def H(self) -> int:
        return self.freqs.size

    @property
    def centered_slice_means(self) -> np.ndarray:
        """``m_h - m`` for every slice, shape (H, p)."""
        return self.slice_means - self.grand_mean


def compute_moments(X, y, slices):
    """
    Compute slice frequencies, slice means, covariance and between-slice matrix.

    Parameters
    ----------
    X : array_like
        Predictor matrix, shape (n, p).
    y : array_like
        Response, shape (n,). Only its length is checked; the slicing already
        encodes the response.
    slices : SliceAssignment
        Slices over the same n observations.

    Returns
    -------
    MomentSet

    Raises
    ------
    InvalidArgument
        If a slice is empty or sizes disagree.
    InvalidData
        If X holds non-finite values.

    Examples
    --------
    >>> from src.sir.slicing import make_slices
    >>> m = compute_moments([[0.], [0.], [1.], [1.]], [1, 2, 3, 4], make_slices([1, 2, 3, 4], 2))
    >>> m.sigma_hat, m.gamma_hat
    (array([[0.25]]), array([[0.25]]))
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if np.asarray(y).size != n or slices.n != n:
        raise InvalidArgument("compute_moments: X, y and slices disagree on n.")
    if not np.all(np.isfinite(X)):
        raise InvalidData("compute_moments: X has non-finite entries.")
    if np.any(slices.counts == 0):
        raise InvalidArgument("compute_moments: empty slice.")

    grand_mean = X.mean(axis=0)
    Xc = X - grand_mean
    sigma_hat = Xc.T @ Xc / n

    labels = slices.slice_of - 1
    sums = np.zeros((slices.H, X.shape[1]))
    np.add.at(sums, labels, X)
    slice_means = sums / slices.counts[:, None]
    freqs = slices.counts / n

    centered = slice_means - grand_mean
    gamma_hat = (centered * freqs[:, None]).T @ centered

    return MomentSet(n=n, grand_mean=grand_mean, slice_means=slice_means, freqs=freqs,
                     sigma_hat=0.5 * (sigma_hat + sigma_hat.T), gamma_hat=0.5 * (gamma_hat + gamma_hat.T))
