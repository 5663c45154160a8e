"""K-nearest-neighbor imputation baseline for node x time matrices.

Similarity between nodes is the Pearson correlation of their readings over
co-observed time slots; a missing entry is filled with the mean of its k
most-correlated neighbors that reported at that slot.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_data_mask

__all__ = ["KnnConfig", "knn_impute"]


@dataclass(frozen=True)
class KnnConfig:
    """Imputation knobs.

    k is the neighbor count; min_overlap the minimum number of co-observed
    slots for a correlation to count. Fallback order when no neighbor
    qualifies is fixed: node mean, then global mean.
    """

    k: int = 3
    min_overlap: int = 5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.min_overlap < 2:
            raise ValueError("min_overlap must be at least 2")


def _similarity(x, mask, min_overlap):
    """Pairwise Pearson correlation over co-observed slots.

    Returns an (n, n) matrix with NaN where the overlap is below
    min_overlap, 0 where either node has zero variance on the overlap, and
    NaN on the diagonal (a node is not its own neighbor).
    """
    m = mask.astype(np.float64)
    overlap = m @ m.T
    s1 = x @ m.T          # sum of node i over slots co-observed with j
    s2 = (x * x) @ m.T
    cross = x @ x.T

    with np.errstate(invalid="ignore", divide="ignore"):
        mean_i = s1 / overlap
        mean_j = mean_i.T
        var_i = s2 / overlap - mean_i**2
        var_j = var_i.T
        cov = cross / overlap - mean_i * mean_j
        sim = cov / np.sqrt(var_i * var_j)

    tiny = 1e-12
    sim = np.where((var_i <= tiny) | (var_j <= tiny), 0.0, sim)
    sim[overlap < min_overlap] = np.nan
    np.fill_diagonal(sim, np.nan)
    return sim


def knn_impute(data, mask, cfg=None):
    """Fill the unobserved entries of a nodes-by-time matrix.

    Parameters
    ----------
    data : array_like of shape (n_nodes, n_slots)
    mask : array_like, same shape
        Boolean observation indicator.
    cfg : KnnConfig, optional

    Returns
    -------
    ndarray
        Copy of `data` with every unobserved entry imputed; observed
        entries pass through unchanged. Ties in similarity break toward the
        lower node index, so the result is deterministic.
    """
    cfg = cfg if cfg is not None else KnnConfig()
    x, mask = check_data_mask(data, mask, ndim=2)

    n_nodes = x.shape[0]
    global_mean = float(x[mask].mean())
    sim = _similarity(x, mask, cfg.min_overlap)

    out = x.copy()
    for i in range(n_nodes):
        missing_slots = np.flatnonzero(~mask[i])
        if missing_slots.size == 0:
            continue
        candidates = np.flatnonzero(np.isfinite(sim[i]))
        # Descending similarity; np.argsort is stable, so equal similarities
        # keep ascending node order.
        candidates = candidates[np.argsort(-sim[i, candidates], kind="stable")]
        node_obs = x[i, mask[i]]
        node_mean = float(node_obs.mean()) if node_obs.size else global_mean
        for t in missing_slots:
            reporting = candidates[mask[candidates, t]]
            if reporting.size:
                out[i, t] = x[reporting[: cfg.k], t].mean()
            else:
                out[i, t] = node_mean
    return out
