"""Singular value soft-thresholding, the proximal engine of every solver."""

from dataclasses import dataclass

import numpy as np

from .validation import check_tensor

__all__ = ["SvdFactors", "svd_factors", "svt", "nuclear_norm", "numerical_rank"]

# Singular values below this fraction of the largest one count as zero when
# reporting rank; plain floating-point SVD noise floor.
RANK_REL_TOL = 1e-12


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD of a matrix: ``u @ diag(sigma) @ vt`` reconstructs the input."""

    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray

    def compose(self):
        return (self.u * self.sigma) @ self.vt


def _svd(matrix):
    # np.linalg.LinAlgError propagates to the caller on non-convergence.
    return np.linalg.svd(matrix, full_matrices=False)


def svd_factors(matrix):
    """Thin SVD of a 2-order tensor, singular values descending."""
    matrix = check_tensor(matrix, ndim=2)
    u, s, vt = _svd(matrix)
    return SvdFactors(u=u, sigma=s, vt=vt)


def _svt(matrix, tau):
    """Threshold the spectrum by `tau`; returns (result, thresholded values)."""
    u, s, vt = _svd(matrix)
    s_thresh = np.maximum(s - tau, 0.0)
    return (u * s_thresh) @ vt, s_thresh


def svt(matrix, tau):
    """Soft-threshold the singular values of `matrix` by `tau`.

    Returns ``U diag(max(sigma - tau, 0)) V^T``, the unique minimizer of
    ``tau * ||X||_* + 0.5 * ||X - matrix||_F^2``.
    """
    matrix = check_tensor(matrix, ndim=2)
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    return _svt(matrix, tau)[0]


def nuclear_norm(matrix):
    """Sum of the singular values of a 2-order tensor."""
    matrix = check_tensor(matrix, ndim=2)
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


def numerical_rank(matrix, rel_tol=RANK_REL_TOL):
    """Number of singular values above ``rel_tol * sigma_max``."""
    matrix = check_tensor(matrix, ndim=2)
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
