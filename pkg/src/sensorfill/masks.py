"""Seeded generation of the two studied missing-data patterns.

All randomness comes from numpy's Philox counter-based bit generator, so a
(shape, spec) pair reproduces the same mask on every platform.
"""

import math
from dataclasses import dataclass

import numpy as np

from .metrics import sampling_ratio

__all__ = [
    "RandomMissing",
    "ConsecutiveMissing",
    "generate_mask",
    "realized_sampling_ratio",
]


def _round_half_up(x):
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class RandomMissing:
    """Uniform missingness: exactly round(sampling_ratio * total) entries kept.

    Sampling is without replacement, so the realized observation count is
    deterministic given the ratio, not merely its expectation.
    """

    sampling_ratio: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.sampling_ratio <= 1.0:
            raise ValueError("sampling_ratio must lie in (0, 1]")


@dataclass(frozen=True)
class ConsecutiveMissing:
    """Some nodes stop reporting: a fraction of nodes lose their last slots.

    round(node_fraction * n_nodes) nodes are drawn without replacement; each
    loses every entry whose time index falls in the last
    round(tail_fraction * n_slots) slots, across all remaining axes.
    """

    node_fraction: float
    tail_fraction: float
    seed: int = 0
    node_axis: int = 0
    time_axis: int = 1

    def __post_init__(self):
        if not 0.0 < self.node_fraction <= 1.0:
            raise ValueError("node_fraction must lie in (0, 1]")
        if not 0.0 <= self.tail_fraction < 1.0:
            raise ValueError("tail_fraction must lie in [0, 1)")
        if self.node_axis == self.time_axis:
            raise ValueError("node_axis and time_axis must differ")


def _rng(seed):
    # Domain-tagged stream: masks never share bits with the synthetic-data
    # generators even when both are given the same seed.
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(0,)))
    )


def generate_mask(shape, spec):
    """Boolean observation mask for `shape` under the missing-pattern `spec`.

    True marks an observed entry. Deterministic per (shape, spec).
    """
    shape = tuple(int(s) for s in shape)
    if any(s <= 0 for s in shape):
        raise ValueError(f"invalid shape {shape}")
    if isinstance(spec, RandomMissing):
        mask = _random_mask(shape, spec)
    elif isinstance(spec, ConsecutiveMissing):
        mask = _consecutive_mask(shape, spec)
    else:
        raise TypeError(f"unknown missing-pattern spec {spec!r}")
    if not mask.any():
        raise ValueError("pattern leaves zero observed entries")
    return mask


def _random_mask(shape, spec):
    total = int(np.prod(shape))
    n_obs = _round_half_up(spec.sampling_ratio * total)
    if n_obs == 0:
        raise ValueError("sampling ratio would yield zero observed entries")
    idx = _rng(spec.seed).choice(total, size=n_obs, replace=False)
    flat = np.zeros(total, dtype=bool)
    flat[idx] = True
    return flat.reshape(shape)


def _consecutive_mask(shape, spec):
    ndim = len(shape)
    for ax in (spec.node_axis, spec.time_axis):
        if not 0 <= ax < ndim:
            raise ValueError(f"axis {ax} out of range for shape {shape}")
    n_nodes = shape[spec.node_axis]
    n_slots = shape[spec.time_axis]
    n_chosen = _round_half_up(spec.node_fraction * n_nodes)
    tail = _round_half_up(spec.tail_fraction * n_slots)
    mask = np.ones(shape, dtype=bool)
    if n_chosen == 0 or tail == 0:
        return mask
    chosen = _rng(spec.seed).choice(n_nodes, size=n_chosen, replace=False)
    view = np.moveaxis(mask, (spec.node_axis, spec.time_axis), (0, 1))
    view[np.ix_(np.sort(chosen), np.arange(n_slots - tail, n_slots))] = False
    return mask


def realized_sampling_ratio(mask):
    """Fraction of entries observed: count(True) / total."""
    return sampling_ratio(mask)
