import numpy as np
import pytest

from opsalign.nn.losses import bce_loss, ce_loss, compute_loss, mae_loss, rmse_loss

LN2 = 0.6931471805599453


def test_rmse_zero_on_perfect_prediction():
    loss, grad = rmse_loss(np.array([0.2, 0.8]), np.array([0.2, 0.8]))
    assert loss == 0.0
    assert np.array_equal(grad, np.zeros(2))


def test_rmse_unit_error():
    loss, _ = rmse_loss(np.array([1.0, 1.0]), np.array([0.0, 0.0]))
    assert loss == pytest.approx(1.0, abs=1e-15)


def test_rmse_gradient_direction():
    pred = np.array([0.5, 0.0])
    target = np.array([0.0, 0.0])
    loss, grad = rmse_loss(pred, target)
    # d/dpred sqrt(mean d^2) = d / (n * loss)
    assert grad[0] == pytest.approx(0.5 / (2 * loss))
    assert grad[1] == 0.0


def test_mae_matches_per_sample_absolute_error():
    loss, grad = mae_loss(np.array([1.0, -2.0]), np.array([0.0, 0.0]))
    assert loss == pytest.approx(1.5)
    assert np.array_equal(grad, [0.5, -0.5])


def test_bce_half_is_ln2():
    for label in (0.0, 1.0):
        loss, _ = bce_loss(np.array([0.5]), np.array([label]))
        assert loss == pytest.approx(LN2, abs=1e-12)


def test_bce_zero_weights_close_the_gate():
    pred = np.array([0.9, 0.1, 0.4])
    label = np.array([1.0, 0.0, 1.0])
    loss, grad = bce_loss(pred, label, weight=np.zeros(3))
    assert loss == 0.0
    assert np.array_equal(grad, np.zeros(3))


def test_bce_one_hot_weights_select_samples():
    pred = np.array([0.9, 0.2])
    label = np.array([1.0, 1.0])
    full, _ = bce_loss(pred[:1], label[:1])
    masked, grad = bce_loss(pred, label, weight=np.array([1.0, 0.0]))
    assert masked == pytest.approx(full)
    assert grad[1] == 0.0


def test_bce_rejects_negative_weights():
    with pytest.raises(ValueError, match="non-negative"):
        bce_loss(np.array([0.5]), np.array([1.0]), weight=np.array([-1.0]))


def test_ce_picks_label_probability():
    probs = np.array([[0.7, 0.2, 0.1], [0.1, 0.8, 0.1]])
    loss, grad = ce_loss(probs, np.array([0, 1]))
    assert loss == pytest.approx(-(np.log(0.7) + np.log(0.8)) / 2)
    assert grad[0, 1] == 0.0 and grad[1, 2] == 0.0
    assert grad[0, 0] == pytest.approx(-1.0 / 0.7 / 2)


def test_ce_rejects_bad_class_index():
    with pytest.raises(ValueError, match="class index"):
        ce_loss(np.array([[0.5, 0.5]]), np.array([2]))


def test_empty_batch_rejected():
    with pytest.raises(ValueError, match="empty batch"):
        rmse_loss(np.array([]), np.array([]))
    with pytest.raises(ValueError, match="empty batch"):
        bce_loss(np.array([]), np.array([]))


def test_dispatch():
    pred = np.array([0.5])
    assert compute_loss(pred, np.array([1.0]), "bce")[0] == pytest.approx(LN2)
    assert compute_loss(pred, np.array([0.5]), "rul_rmse")[0] == 0.0
    assert compute_loss(pred, np.array([0.0]), "rul_mae")[0] == pytest.approx(0.5)
    with pytest.raises(ValueError, match="unknown loss"):
        compute_loss(pred, pred, "hinge")
