"""Dense tensor primitives: mode-k fold/unfold, norms, elementwise algebra.

Modes are 0-based, matching numpy axis numbering. The mode-k unfolding puts
mode k on the rows; the columns enumerate the remaining modes in increasing
order with earlier modes varying fastest (Fortran-order flattening of the
remaining axes). ``fold`` inverts ``unfold`` exactly under this convention.
"""

import numpy as np

from .validation import check_data_mask, check_tensor

__all__ = [
    "unfold",
    "fold",
    "frobenius_norm",
    "inner_product",
    "hadamard",
    "elementwise_div",
    "masked",
    "masked_std",
]


def _check_mode(mode, ndim):
    if not 0 <= mode < ndim:
        raise ValueError(f"mode {mode} out of range for a {ndim}-order tensor")


def unfold(tensor, mode):
    """Mode-`mode` unfolding of `tensor` into a matrix.

    Parameters
    ----------
    tensor : ndarray
    mode : int
        Axis placed on the rows, in ``range(tensor.ndim)``.

    Returns
    -------
    ndarray of shape ``(tensor.shape[mode], -1)``
    """
    tensor = np.asarray(tensor)
    _check_mode(mode, tensor.ndim)
    return np.reshape(
        np.moveaxis(tensor, mode, 0), (tensor.shape[mode], -1), order="F"
    )


def fold(matrix, mode, shape):
    """Inverse of :func:`unfold`: refold a mode-`mode` unfolding into `shape`."""
    matrix = np.asarray(matrix)
    shape = tuple(shape)
    _check_mode(mode, len(shape))
    rest = [s for ax, s in enumerate(shape) if ax != mode]
    expected = (shape[mode], int(np.prod(rest)) if rest else 1)
    if matrix.ndim != 2 or matrix.shape != expected:
        raise ValueError(
            f"cannot fold shape {matrix.shape} into {shape} along mode {mode}; "
            f"expected {expected}"
        )
    return np.moveaxis(np.reshape(matrix, [shape[mode]] + rest, order="F"), 0, mode)


def frobenius_norm(tensor):
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(tensor, dtype=np.float64).ravel()))


def inner_product(a, b):
    """Sum of the entrywise products of two identically shaped tensors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def hadamard(a, b):
    """Entrywise product of two identically shaped tensors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def elementwise_div(num, den):
    """Entrywise quotient; every divisor entry must be strictly positive."""
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    if num.shape != den.shape:
        raise ValueError(f"shape mismatch: {num.shape} vs {den.shape}")
    if not (den > 0).all():
        raise ValueError("divisor has non-positive entries")
    return num / den


def masked(tensor, mask):
    """Zero the unobserved entries of `tensor` (the sampling projection)."""
    tensor, mask = check_data_mask(tensor, mask)
    return np.where(mask, tensor, 0.0)


def masked_std(tensor, mask):
    """Population standard deviation of the observed entries.

    Raises ``ValueError`` when fewer than two entries are observed.
    """
    tensor = check_tensor(tensor)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != tensor.shape:
        raise ValueError(f"mask shape {mask.shape} does not match {tensor.shape}")
    vals = tensor[mask]
    if vals.size < 2:
        raise ValueError("need at least 2 observed entries to compute a spread")
    return float(np.std(vals))
