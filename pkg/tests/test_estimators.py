import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sensorfill.datasets import synth_lowrank_matrix, synth_tucker_tensor
from sensorfill.estimators import (
    AdmacCompleter,
    AdrmCompleter,
    HalrtcCompleter,
    KnnCompleter,
    RadmacCompleter,
)
from sensorfill.masks import RandomMissing, generate_mask
from sensorfill.metrics import error_ratio


@pytest.fixture(scope="module")
def matrix_instance():
    truth = synth_lowrank_matrix(20, 24, 2, seed=3)
    mask = generate_mask(truth.shape, RandomMissing(0.6, seed=3))
    return truth, mask


@pytest.fixture(scope="module")
def tensor_instance():
    truth = synth_tucker_tensor((10, 10, 4), (2, 2, 2), seed=8)
    mask = generate_mask(truth.shape, RandomMissing(0.6, seed=8))
    return truth, mask


def test_get_params_round_trip():
    est = AdrmCompleter(max_iters=77)
    params = est.get_params()
    assert params["max_iters"] == 77
    assert params["lambda0"] == 1.0
    est.set_params(tol=1e-8)
    assert est.get_params()["tol"] == 1e-8


def test_sklearn_clone_preserves_params():
    for est in (
        AdrmCompleter(rho=0.5),
        AdmacCompleter(mode_weights=(1.0, 1.0, 2.0)),
        HalrtcCompleter(max_iters=50),
        RadmacCompleter(z_update="paper"),
        KnnCompleter(k=5, min_overlap=2),
    ):
        twin = clone(est)
        assert twin.get_params() == est.get_params()


def test_fit_returns_self_and_sets_state(matrix_instance):
    truth, mask = matrix_instance
    est = AdrmCompleter()
    assert est.fit(truth, mask=mask) is est
    assert est.estimate_.shape == truth.shape
    assert est.n_iter_ >= 1
    assert isinstance(est.converged_, bool)
    assert est.result_.estimate is est.estimate_
    np.testing.assert_array_equal(est.mask_, mask)


def test_nan_marks_missing_same_as_mask(matrix_instance):
    truth, mask = matrix_instance
    with_nans = np.where(mask, truth, np.nan)
    by_mask = AdrmCompleter().fit(truth, mask=mask).estimate_
    by_nan = AdrmCompleter().fit(with_nans).estimate_
    np.testing.assert_array_equal(by_mask, by_nan)


def test_transform_fills_only_missing(matrix_instance):
    truth, mask = matrix_instance
    est = AdrmCompleter().fit(truth, mask=mask)
    out = est.transform(truth, mask=mask)
    np.testing.assert_array_equal(out[mask], truth[mask])
    np.testing.assert_array_equal(out[~mask], est.estimate_[~mask])


def test_transform_accepts_nan_input(matrix_instance):
    truth, mask = matrix_instance
    with_nans = np.where(mask, truth, np.nan)
    est = AdrmCompleter().fit(with_nans)
    out = est.transform(with_nans)
    assert np.isfinite(out).all()
    np.testing.assert_array_equal(out[mask], truth[mask])


def test_fit_transform_matches_fit_then_transform(matrix_instance):
    truth, mask = matrix_instance
    a = AdrmCompleter().fit_transform(truth, mask=mask)
    b = AdrmCompleter().fit(truth, mask=mask).transform(truth, mask=mask)
    np.testing.assert_array_equal(a, b)


def test_transform_requires_fit():
    with pytest.raises(NotFittedError):
        AdrmCompleter().transform(np.zeros((3, 3)))


def test_transform_rejects_shape_mismatch(matrix_instance):
    truth, mask = matrix_instance
    est = AdrmCompleter().fit(truth, mask=mask)
    with pytest.raises(ValueError, match="shape"):
        est.transform(np.zeros((5, 5)))


def test_adrm_completer_recovers(matrix_instance):
    truth, mask = matrix_instance
    est = AdrmCompleter().fit(truth, mask=mask)
    assert error_ratio(truth, est.estimate_, ~mask) < 0.05


def test_admac_completer_recovers(tensor_instance):
    truth, mask = tensor_instance
    est = AdmacCompleter().fit(truth, mask=mask)
    assert error_ratio(truth, est.estimate_, ~mask) < 0.1
    assert est.result_.final_lambda == pytest.approx(1e-6)


def test_halrtc_completer_pins_observed(tensor_instance):
    truth, mask = tensor_instance
    est = HalrtcCompleter().fit(truth, mask=mask)
    np.testing.assert_array_equal(est.estimate_[mask], truth[mask])
    assert error_ratio(truth, est.estimate_, ~mask) < 0.2


def test_radmac_completer_params_flow_through(tensor_instance):
    truth, mask = tensor_instance
    exact = RadmacCompleter(max_iters=60).fit(truth, mask=mask)
    paper = RadmacCompleter(max_iters=60, z_update="paper").fit(truth, mask=mask)
    assert exact.estimate_.shape == truth.shape
    assert not np.array_equal(exact.estimate_, paper.estimate_)
    with pytest.raises(ValueError, match="z_update"):
        RadmacCompleter(z_update="newton").fit(truth, mask=mask)


def test_knn_completer_minimal_surface():
    base = np.linspace(0.0, 8.0, 9)
    truth = np.vstack([base, base])
    mask = np.ones_like(truth, dtype=bool)
    mask[0, [0, 4]] = False
    est = KnnCompleter(k=1, min_overlap=3).fit(truth, mask=mask)
    np.testing.assert_allclose(est.estimate_[0, [0, 4]], truth[0, [0, 4]])
    assert not hasattr(est, "result_")
    assert not hasattr(est, "n_iter_")
    out = est.transform(truth, mask=mask)
    np.testing.assert_array_equal(out[mask], truth[mask])


def test_estimators_reject_unknown_param():
    with pytest.raises(ValueError):
        AdrmCompleter().set_params(gamma=2.0)
