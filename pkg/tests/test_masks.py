import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sensorfill.masks import (
    ConsecutiveMissing,
    RandomMissing,
    generate_mask,
    realized_sampling_ratio,
)


def _round_half_up(x):
    return int(np.floor(x + 0.5))


def test_random_mask_exact_count():
    mask = generate_mask((10, 100), RandomMissing(0.37, seed=0))
    assert mask.sum() == _round_half_up(0.37 * 1000)


def test_random_mask_full_ratio():
    mask = generate_mask((6, 7), RandomMissing(1.0, seed=3))
    assert mask.all()


def test_random_mask_deterministic_per_seed():
    a = generate_mask((20, 30), RandomMissing(0.5, seed=9))
    b = generate_mask((20, 30), RandomMissing(0.5, seed=9))
    c = generate_mask((20, 30), RandomMissing(0.5, seed=10))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(2, 12),
    t=st.integers(2, 40),
    ratio=st.floats(0.05, 1.0),
    seed=st.integers(0, 1000),
)
def test_random_mask_count_property(n, t, ratio, seed):
    expected = _round_half_up(ratio * n * t)
    if expected == 0:
        with pytest.raises(ValueError):
            generate_mask((n, t), RandomMissing(ratio, seed=seed))
    else:
        mask = generate_mask((n, t), RandomMissing(ratio, seed=seed))
        assert mask.sum() == expected


def test_random_mask_rejects_everything_missing():
    # so small a ratio that the rounded observation count is zero
    with pytest.raises(ValueError, match="observed"):
        generate_mask((3, 3), RandomMissing(0.01, seed=0))


def test_random_missing_validates_ratio():
    with pytest.raises(ValueError):
        RandomMissing(0.0)
    with pytest.raises(ValueError):
        RandomMissing(1.2)
    RandomMissing(1.0)


def test_consecutive_counts_on_matrix():
    """Half the nodes of a 10x100 matrix lose their last 10 slots: 950 left."""
    spec = ConsecutiveMissing(node_fraction=0.5, tail_fraction=0.1, seed=4)
    mask = generate_mask((10, 100), spec)
    assert mask.sum() == 950
    affected = np.where(~mask.all(axis=1))[0]
    assert len(affected) == 5
    for i in affected:
        assert mask[i, :90].all()
        assert not mask[i, 90:].any()


def test_consecutive_zero_tail_observes_everything():
    mask = generate_mask((8, 20), ConsecutiveMissing(0.5, 0.0, seed=1))
    assert mask.all()


def test_consecutive_on_tensor_axes():
    """With time on axis 0 and nodes on axis 1, whole trailing time rows of
    the chosen nodes go missing across every attribute slice."""
    spec = ConsecutiveMissing(
        node_fraction=0.25, tail_fraction=0.2, seed=7, node_axis=1, time_axis=0
    )
    mask = generate_mask((40, 8, 3), spec)
    affected = np.where(~mask.all(axis=(0, 2)))[0]
    assert len(affected) == 2
    for node in affected:
        assert mask[:32, node, :].all()
        assert not mask[32:, node, :].any()
    untouched = np.setdiff1d(np.arange(8), affected)
    assert mask[:, untouched, :].all()


def test_consecutive_deterministic_and_seed_sensitive():
    spec_a = ConsecutiveMissing(0.5, 0.3, seed=2)
    spec_b = ConsecutiveMissing(0.5, 0.3, seed=3)
    m1 = generate_mask((12, 50), spec_a)
    m2 = generate_mask((12, 50), spec_a)
    np.testing.assert_array_equal(m1, m2)
    assert not np.array_equal(m1, generate_mask((12, 50), spec_b))


def test_consecutive_validates_fields():
    with pytest.raises(ValueError):
        ConsecutiveMissing(node_fraction=0.0, tail_fraction=0.1)
    with pytest.raises(ValueError):
        ConsecutiveMissing(node_fraction=0.5, tail_fraction=1.0)
    with pytest.raises(ValueError):
        ConsecutiveMissing(0.5, 0.1, node_axis=1, time_axis=1)


def test_consecutive_rejects_all_missing():
    with pytest.raises(ValueError, match="observed"):
        generate_mask((2, 10), ConsecutiveMissing(1.0, 0.99, seed=0))


def test_realized_sampling_ratio():
    mask = np.zeros((4, 5), dtype=bool)
    mask[0, :3] = True
    assert realized_sampling_ratio(mask) == pytest.approx(3 / 20)
    assert realized_sampling_ratio(np.ones((2, 2), dtype=bool)) == 1.0
