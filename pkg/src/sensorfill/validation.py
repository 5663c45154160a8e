"""Input validation helpers shared by all solvers and estimators."""

import numpy as np

__all__ = ["check_tensor", "check_mask", "check_data_mask", "observed_values"]


def check_tensor(x, ndim=None, name="data"):
    """Coerce `x` to a float64 ndarray and reject non-finite entries.

    Parameters
    ----------
    x : array_like
        Input values.
    ndim : int, optional
        Required number of dimensions.
    name : str
        Name used in error messages.

    Returns
    -------
    ndarray
        float64 array (a copy only when conversion requires one).
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_mask(mask, shape=None, name="mask"):
    """Coerce `mask` to a boolean ndarray, requiring entries in {0, 1}."""
    arr = np.asarray(mask)
    if arr.dtype != np.bool_:
        num = np.asarray(arr, dtype=np.float64)
        if not np.isin(num, (0.0, 1.0)).all():
            raise ValueError(f"{name} entries must be 0 or 1")
        arr = num.astype(bool)
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"{name} shape {arr.shape} does not match data shape {tuple(shape)}")
    return arr


def check_data_mask(data, mask, ndim=None):
    """Validate a (data, mask) pair and zero out the unobserved entries.

    Unobserved positions may hold anything (NaN included); they are replaced
    by 0 so downstream code sees exact projection-onto-observed semantics.
    Observed entries must be finite and the mask must observe at least one.

    Returns
    -------
    (ndarray, ndarray)
        The zero-filled float64 data and the boolean mask.
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("data is empty")
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"data must be {ndim}-dimensional, got shape {arr.shape}")
    m = check_mask(mask, shape=arr.shape)
    if not m.any():
        raise ValueError("mask has no observed entries")
    filled = np.where(m, arr, 0.0)
    if not np.isfinite(filled).all():
        raise ValueError("observed entries contain non-finite values")
    return filled, m


def observed_values(data, mask):
    """Flat array of the observed entries of `data`."""
    return data[mask]
