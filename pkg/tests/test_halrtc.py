import numpy as np
import pytest

from sensorfill import (
    admac_reconstruct,
    error_ratio,
    generate_mask,
    halrtc_reconstruct,
    synth_tucker_tensor,
)
from sensorfill.config import resolve_rho
from sensorfill.masks import RandomMissing
from sensorfill.solvers.halrtc import halrtc_iterations


@pytest.fixture(scope="module")
def tucker_instance():
    truth = synth_tucker_tensor((20, 20, 5), (2, 2, 2), seed=11)
    mask = generate_mask(truth.shape, RandomMissing(0.4, seed=11))
    return truth, mask


def test_recovery_close_to_relaxed_solver(tucker_instance):
    truth, mask = tucker_instance
    res = halrtc_reconstruct(truth, mask)
    err = error_ratio(truth, res.estimate, ~mask)
    assert err < 0.05
    err_admac = error_ratio(truth, admac_reconstruct(truth, mask).estimate, ~mask)
    assert err <= 2 * max(err_admac, 1e-12)
    assert res.final_lambda is None
    assert res.lambda_trace == []


def test_observed_entries_pinned_every_iteration(tucker_instance):
    truth, mask = tucker_instance
    m = np.where(mask, truth, 0.0)
    rho = resolve_rho(None, m, mask)
    gen = halrtc_iterations(m, mask, rho)
    for _ in range(60):
        it = next(gen)
        np.testing.assert_array_equal(it.x[mask], m[mask])


def test_fully_observed_is_identity_every_iteration():
    g = np.random.default_rng(0)
    truth = g.standard_normal((6, 7, 3))
    mask = np.ones_like(truth, dtype=bool)
    gen = halrtc_iterations(truth, mask, rho=1.0)
    for _ in range(5):
        it = next(gen)
        np.testing.assert_array_equal(it.x, truth)
    res = halrtc_reconstruct(truth, mask)
    np.testing.assert_array_equal(res.estimate, truth)


def test_zero_data_zero_estimate():
    mask = np.zeros((4, 4, 4), dtype=bool)
    mask[0] = True
    res = halrtc_reconstruct(np.zeros((4, 4, 4)), mask, rho=1.0, max_iters=5)
    np.testing.assert_array_equal(res.estimate, np.zeros((4, 4, 4)))


def test_matrix_input(tucker_instance):
    g = np.random.default_rng(5)
    truth = g.standard_normal((20, 4)) @ g.standard_normal((4, 30))
    mask = generate_mask(truth.shape, RandomMissing(0.7, seed=5))
    res = halrtc_reconstruct(truth, mask)
    assert error_ratio(truth, res.estimate, ~mask) < 0.1


def test_deterministic_bitwise(tucker_instance):
    truth, mask = tucker_instance
    a = halrtc_reconstruct(truth, mask)
    b = halrtc_reconstruct(truth, mask)
    np.testing.assert_array_equal(a.estimate, b.estimate)
    assert a.residual_trace == b.residual_trace


def test_parameter_validation(tucker_instance):
    truth, mask = tucker_instance
    with pytest.raises(ValueError, match="max_iters"):
        halrtc_reconstruct(truth, mask, max_iters=0)
    with pytest.raises(ValueError, match="tol"):
        halrtc_reconstruct(truth, mask, tol=0.0)
    with pytest.raises(ValueError, match="no observed"):
        halrtc_reconstruct(truth, np.zeros_like(mask))
    with pytest.raises(ValueError, match="rho"):
        halrtc_reconstruct(np.ones((3, 3)), np.ones((3, 3), dtype=bool))
