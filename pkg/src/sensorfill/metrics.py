"""Evaluation metrics for reconstruction experiments."""

import numpy as np

__all__ = ["error_ratio", "sampling_ratio"]


def error_ratio(truth, estimate, missing):
    """Relative reconstruction error over the missing set.

        sqrt( sum_missing (x - xhat)^2 ) / sqrt( sum_missing x^2 )

    Parameters
    ----------
    truth, estimate : array_like, same shape
    missing : array_like of bool, same shape
        True selects the entries to evaluate (the held-out set).

    Raises
    ------
    ValueError
        Shape mismatch, empty missing set, or truth identically zero on it.
    """
    truth = np.asarray(truth, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    missing = np.asarray(missing, dtype=bool)
    if truth.shape != estimate.shape or truth.shape != missing.shape:
        raise ValueError(
            f"shape mismatch: truth {truth.shape}, estimate {estimate.shape}, "
            f"missing {missing.shape}"
        )
    if not missing.any():
        raise ValueError("missing set is empty")
    x = truth[missing]
    denom = np.sqrt(np.sum(x * x))
    if denom == 0.0:
        raise ValueError("truth is identically zero on the missing set")
    diff = x - estimate[missing]
    return float(np.sqrt(np.sum(diff * diff)) / denom)


def sampling_ratio(mask):
    """Fraction of entries marked observed; 0.0 for a zero-size mask."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size == 0:
        return 0.0
    return float(np.count_nonzero(mask)) / mask.size
