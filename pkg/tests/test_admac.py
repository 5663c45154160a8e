import numpy as np
import pytest

from sensorfill import (
    admac_reconstruct,
    error_ratio,
    generate_mask,
    synth_lowrank_matrix,
    synth_tucker_tensor,
)
from sensorfill.config import SolverConfig, resolve_rho
from sensorfill.masks import RandomMissing
from sensorfill.solvers.admac import admac_iterations
from sensorfill.tensor_ops import frobenius_norm


@pytest.fixture(scope="module")
def tucker_instance():
    truth = synth_tucker_tensor((20, 20, 5), (2, 2, 2), seed=11)
    mask = generate_mask(truth.shape, RandomMissing(0.4, seed=11))
    return truth, mask


@pytest.fixture(scope="module")
def tucker_result(tucker_instance):
    truth, mask = tucker_instance
    return admac_reconstruct(truth, mask)


def test_recovers_tucker_tensor(tucker_instance, tucker_result):
    truth, mask = tucker_instance
    res = tucker_result
    assert res.converged
    assert error_ratio(truth, res.estimate, ~mask) < 0.05


def test_matrix_input_degenerates_to_two_mode_variant():
    """On a matrix the tensor solver is a two-splitting cousin of the matrix
    solver and must recover the same easy instance."""
    truth = synth_lowrank_matrix(50, 60, 3, seed=7)
    mask = generate_mask(truth.shape, RandomMissing(0.5, seed=7))
    res = admac_reconstruct(truth, mask)
    assert error_ratio(truth, res.estimate, ~mask) < 0.02


def test_consensus_and_fidelity_at_convergence(tucker_instance, tucker_result):
    truth, mask = tucker_instance
    cfg = SolverConfig()
    m = np.where(mask, truth, 0.0)
    rho = resolve_rho(None, m, mask)
    gen = admac_iterations(m, mask, cfg, rho)
    it = None
    for _ in range(tucker_result.iterations):
        it = next(gen)
    consensus = max(
        frobenius_norm(y - it.x) / max(1.0, frobenius_norm(it.x)) for y in it.ys
    )
    assert consensus < 10 * cfg.tol
    fidelity = frobenius_norm(np.where(mask, it.x - m, 0.0)) / frobenius_norm(m)
    assert fidelity <= 1e-3
    np.testing.assert_array_equal(it.x, tucker_result.estimate)


def test_mode_permutation_symmetry(tucker_instance):
    """Permuting tensor modes permutes the estimate the same way."""
    truth, mask = tucker_instance
    res = admac_reconstruct(truth, mask)
    perm = (1, 2, 0)
    res_p = admac_reconstruct(truth.transpose(perm), mask.transpose(perm))
    np.testing.assert_allclose(
        res_p.estimate, res.estimate.transpose(perm), rtol=0, atol=1e-9
    )


def test_zero_data_zero_estimate():
    mask = np.zeros((4, 5, 3), dtype=bool)
    mask[:2] = True
    res = admac_reconstruct(np.zeros((4, 5, 3)), mask, SolverConfig(rho=1.0))
    np.testing.assert_array_equal(res.estimate, np.zeros((4, 5, 3)))


def test_deterministic_bitwise(tucker_instance):
    truth, mask = tucker_instance
    a = admac_reconstruct(truth, mask)
    b = admac_reconstruct(truth, mask)
    np.testing.assert_array_equal(a.estimate, b.estimate)
    assert a.residual_trace == b.residual_trace


def test_mode_weights_length_checked(tucker_instance):
    truth, mask = tucker_instance
    with pytest.raises(ValueError, match="mode_weights"):
        admac_reconstruct(truth, mask, SolverConfig(mode_weights=(1.0, 1.0)))


def test_four_way_input_accepted():
    g = np.random.default_rng(3)
    core = g.standard_normal((2, 2, 2, 2))
    t = core
    for ax, n in enumerate((6, 5, 4, 3)):
        q, _ = np.linalg.qr(g.standard_normal((n, 2)))
        t = np.moveaxis(np.tensordot(q, t, axes=(1, ax)), 0, ax)
    mask = generate_mask(t.shape, RandomMissing(0.6, seed=3))
    res = admac_reconstruct(t, mask)
    assert np.isfinite(res.estimate).all()


def test_errors(tucker_instance):
    truth, mask = tucker_instance
    with pytest.raises(ValueError, match="no observed"):
        admac_reconstruct(truth, np.zeros_like(mask))
    with pytest.raises(ValueError):
        admac_reconstruct(np.ones(5), np.ones(5, dtype=bool))
