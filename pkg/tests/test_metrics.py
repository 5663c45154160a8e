import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sensorfill.metrics import error_ratio, sampling_ratio


def test_error_ratio_zero_on_exact_match():
    truth = np.arange(12.0).reshape(3, 4) + 1.0
    missing = np.zeros((3, 4), dtype=bool)
    missing[1, :2] = True
    assert error_ratio(truth, truth.copy(), missing) == 0.0


def test_error_ratio_one_for_zero_estimate():
    truth = np.arange(1.0, 13.0).reshape(3, 4)
    missing = np.ones((3, 4), dtype=bool)
    est = np.zeros_like(truth)
    assert error_ratio(truth, est, missing) == pytest.approx(1.0, abs=1e-12)


def test_error_ratio_hand_example():
    # missing truths {3, 4}, estimates {3, 0}: sqrt(16)/sqrt(25) = 0.8
    truth = np.array([[3.0, 4.0]])
    est = np.array([[3.0, 0.0]])
    missing = np.array([[True, True]])
    assert error_ratio(truth, est, missing) == pytest.approx(0.8, abs=1e-12)


def test_error_ratio_restricted_to_missing_set():
    truth = np.array([[1.0, 10.0], [2.0, 20.0]])
    est = np.array([[999.0, 10.0], [999.0, 20.0]])  # wrong only where observed
    missing = np.array([[False, True], [False, True]])
    assert error_ratio(truth, est, missing) == 0.0


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(0.001, 1000), seed=st.integers(0, 500))
def test_error_ratio_scale_invariant(scale, seed):
    g = np.random.default_rng(seed)
    truth = g.standard_normal((5, 6)) + 2.0
    est = truth + 0.3 * g.standard_normal((5, 6))
    missing = g.random((5, 6)) < 0.5
    if not missing.any():
        missing[0, 0] = True
    base = error_ratio(truth, est, missing)
    scaled = error_ratio(scale * truth, scale * est, missing)
    assert scaled == pytest.approx(base, abs=1e-12, rel=1e-12)


def test_error_ratio_positive_unless_exact():
    truth = np.ones((2, 2))
    est = np.ones((2, 2))
    est[0, 0] = 1.0 + 1e-9
    missing = np.ones((2, 2), dtype=bool)
    assert error_ratio(truth, est, missing) > 0.0


def test_error_ratio_errors():
    truth = np.ones((2, 2))
    with pytest.raises(ValueError):
        error_ratio(truth, np.ones((2, 3)), np.ones((2, 2), dtype=bool))
    with pytest.raises(ValueError):
        error_ratio(truth, truth, np.zeros((2, 2), dtype=bool))
    # truth identically zero on the missing set: denominator undefined
    zero = np.zeros((2, 2))
    with pytest.raises(ValueError):
        error_ratio(zero, truth, np.ones((2, 2), dtype=bool))


def test_sampling_ratio_basics():
    assert sampling_ratio(np.ones((3, 3), dtype=bool)) == 1.0
    assert sampling_ratio(np.zeros((3, 3), dtype=bool)) == 0.0
    mask = np.zeros(10, dtype=bool)
    mask[:3] = True
    assert sampling_ratio(mask) == pytest.approx(0.3, abs=1e-15)


def test_sampling_ratio_complement_identity():
    g = np.random.default_rng(8)
    mask = g.random((7, 11)) < 0.4
    assert sampling_ratio(mask) + sampling_ratio(~mask) == 1.0


def test_sampling_ratio_empty_array():
    assert sampling_ratio(np.zeros((0,), dtype=bool)) == 0.0
