"""scikit-learn style wrappers around the completion solvers.

Completion is transductive: fit() solves for the full estimate of the array
it is given, transform() returns that array with its missing entries filled
in. Missing entries are taken from the mask when one is passed, otherwise
non-finite values (NaN) mark them.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import SolverConfig
from .knn import KnnConfig, knn_impute
from .solvers import (
    adrm_reconstruct,
    admac_reconstruct,
    halrtc_reconstruct,
    radmac_reconstruct,
)
from .validation import check_mask

__all__ = [
    "AdrmCompleter",
    "AdmacCompleter",
    "HalrtcCompleter",
    "RadmacCompleter",
    "KnnCompleter",
]


def _resolve_mask(X, mask):
    X = np.asarray(X, dtype=np.float64)
    if mask is None:
        return X, np.isfinite(X)
    return X, check_mask(mask, shape=X.shape)


class _BaseCompleter(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing; subclasses provide _solve."""

    def fit(self, X, y=None, mask=None):
        """Solve the completion problem for X.

        Parameters
        ----------
        X : array_like
            Data with missing entries (NaN, or per `mask`).
        y : ignored
        mask : array_like of bool, optional
            True marks observed entries. Defaults to finite entries of X.
        """
        X, mask = _resolve_mask(X, mask)
        result = self._solve(X, mask)
        self.result_ = result
        self.estimate_ = result.estimate
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.mask_ = mask
        return self

    def transform(self, X, mask=None):
        """Return X with missing entries replaced by the fitted estimate."""
        check_is_fitted(self, "estimate_")
        X, mask = _resolve_mask(X, mask)
        if X.shape != self.estimate_.shape:
            raise ValueError(
                f"X has shape {X.shape}, fitted on {self.estimate_.shape}"
            )
        return np.where(mask, X, self.estimate_)

    def fit_transform(self, X, y=None, mask=None):
        return self.fit(X, y=y, mask=mask).transform(X, mask=mask)


class AdrmCompleter(_BaseCompleter):
    """Matrix completion by annealed ADMM rank minimization."""

    def __init__(self, lambda0=1.0, c_lambda=0.25, lambda_min=1e-6, rho=None,
                 max_iters=500, tol=1e-6):
        self.lambda0 = lambda0
        self.c_lambda = c_lambda
        self.lambda_min = lambda_min
        self.rho = rho
        self.max_iters = max_iters
        self.tol = tol

    def _solve(self, X, mask):
        cfg = SolverConfig(lambda0=self.lambda0, c_lambda=self.c_lambda,
                           lambda_min=self.lambda_min, rho=self.rho,
                           max_iters=self.max_iters, tol=self.tol)
        return adrm_reconstruct(X, mask, cfg)


class AdmacCompleter(_BaseCompleter):
    """Tensor completion, every mode unfolding penalized for rank."""

    def __init__(self, lambda0=1.0, c_lambda=0.25, lambda_min=1e-6, rho=None,
                 max_iters=500, tol=1e-6, mode_weights=None):
        self.lambda0 = lambda0
        self.c_lambda = c_lambda
        self.lambda_min = lambda_min
        self.rho = rho
        self.max_iters = max_iters
        self.tol = tol
        self.mode_weights = mode_weights

    def _solve(self, X, mask):
        cfg = SolverConfig(lambda0=self.lambda0, c_lambda=self.c_lambda,
                           lambda_min=self.lambda_min, rho=self.rho,
                           max_iters=self.max_iters, tol=self.tol,
                           mode_weights=self.mode_weights)
        return admac_reconstruct(X, mask, cfg)


class HalrtcCompleter(_BaseCompleter):
    """Tensor completion with observed entries pinned exactly."""

    def __init__(self, rho=None, max_iters=500, tol=1e-6):
        self.rho = rho
        self.max_iters = max_iters
        self.tol = tol

    def _solve(self, X, mask):
        return halrtc_reconstruct(X, mask, rho=self.rho,
                                  max_iters=self.max_iters, tol=self.tol)


class RadmacCompleter(_BaseCompleter):
    """Mixture-model completion for tensors low-rank in some modes only."""

    def __init__(self, lambda0=1.0, c_lambda=0.25, lambda_min=1e-6, rho=None,
                 max_iters=500, tol=1e-6, mode_weights=None, z_update="exact"):
        self.lambda0 = lambda0
        self.c_lambda = c_lambda
        self.lambda_min = lambda_min
        self.rho = rho
        self.max_iters = max_iters
        self.tol = tol
        self.mode_weights = mode_weights
        self.z_update = z_update

    def _solve(self, X, mask):
        cfg = SolverConfig(lambda0=self.lambda0, c_lambda=self.c_lambda,
                           lambda_min=self.lambda_min, rho=self.rho,
                           max_iters=self.max_iters, tol=self.tol,
                           mode_weights=self.mode_weights)
        return radmac_reconstruct(X, mask, cfg, z_update=self.z_update)


class KnnCompleter(_BaseCompleter):
    """Correlation-based nearest-neighbor imputation for matrices."""

    def __init__(self, k=3, min_overlap=5):
        self.k = k
        self.min_overlap = min_overlap

    def fit(self, X, y=None, mask=None):
        X, mask = _resolve_mask(X, mask)
        cfg = KnnConfig(k=self.k, min_overlap=self.min_overlap)
        self.estimate_ = knn_impute(X, mask, cfg)
        self.mask_ = mask
        return self
