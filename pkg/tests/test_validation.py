import numpy as np
import pytest

from sensorfill.validation import (
    check_data_mask,
    check_mask,
    check_tensor,
    observed_values,
)


def test_check_tensor_coerces_to_float64():
    out = check_tensor([[1, 2], [3, 4]])
    assert out.dtype == np.float64
    np.testing.assert_array_equal(out, [[1.0, 2.0], [3.0, 4.0]])


def test_check_tensor_rejects_empty_and_nonfinite():
    with pytest.raises(ValueError, match="empty"):
        check_tensor(np.zeros((0, 3)))
    with pytest.raises(ValueError, match="non-finite"):
        check_tensor([1.0, np.nan])
    with pytest.raises(ValueError, match="non-finite"):
        check_tensor([1.0, np.inf])


def test_check_tensor_enforces_ndim():
    with pytest.raises(ValueError, match="2-dimensional"):
        check_tensor(np.zeros(4), ndim=2)
    check_tensor(np.zeros((2, 2)), ndim=2)


def test_check_mask_accepts_zero_one_numerics():
    m = check_mask([[0, 1], [1.0, 0.0]])
    assert m.dtype == np.bool_
    np.testing.assert_array_equal(m, [[False, True], [True, False]])


def test_check_mask_rejects_other_values_and_shape():
    with pytest.raises(ValueError, match="0 or 1"):
        check_mask([[0.5, 1.0]])
    with pytest.raises(ValueError, match="shape"):
        check_mask(np.ones((2, 3), dtype=bool), shape=(3, 2))


def test_check_data_mask_zero_fills_unobserved():
    data = np.array([[1.0, np.nan], [np.inf, 4.0]])
    mask = np.array([[True, False], [False, True]])
    filled, m = check_data_mask(data, mask)
    np.testing.assert_array_equal(filled, [[1.0, 0.0], [0.0, 4.0]])
    assert m is not mask or m.dtype == np.bool_


def test_check_data_mask_rejects_nonfinite_observed():
    data = np.array([[np.nan, 2.0]])
    mask = np.array([[True, True]])
    with pytest.raises(ValueError, match="non-finite"):
        check_data_mask(data, mask)


def test_check_data_mask_requires_an_observation():
    with pytest.raises(ValueError, match="no observed"):
        check_data_mask(np.ones((2, 2)), np.zeros((2, 2), dtype=bool))


def test_observed_values_flat_order():
    data = np.arange(6.0).reshape(2, 3)
    mask = np.array([[True, False, True], [False, True, False]])
    np.testing.assert_array_equal(observed_values(data, mask), [0.0, 2.0, 4.0])
