"""Loss functions returning (scalar, gradient-w.r.t.-prediction).

Probabilities are clamped to [CLAMP, 1-CLAMP] before any logarithm; the
gradient is zero where the clamp is active, matching the clamped function
exactly (finite-difference checks rely on this).
"""

import numpy as np

CLAMP = 1e-7


def _require_batch(arr):
    if arr.size == 0:
        raise ValueError("empty batch")


def rmse_loss(pred, target):
    """Batch RMSE: sqrt(mean((pred - target)^2))."""
    pred = np.asarray(pred, dtype=np.float64)
    shape = pred.shape
    pred = pred.reshape(-1)
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    _require_batch(pred)
    diff = pred - target
    loss = float(np.sqrt(np.mean(diff * diff)))
    if loss == 0.0:
        return 0.0, np.zeros(shape)
    grad = diff / (pred.size * loss)
    return loss, grad.reshape(shape)


def mae_loss(pred, target):
    """Mean absolute error, the per-sample |pred - target| reading."""
    pred = np.asarray(pred, dtype=np.float64)
    shape = pred.shape
    pred = pred.reshape(-1)
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    _require_batch(pred)
    diff = pred - target
    loss = float(np.mean(np.abs(diff)))
    grad = np.sign(diff) / pred.size
    return loss, grad.reshape(shape)


def bce_elements(pred, label):
    """Per-sample BCE values and their derivatives w.r.t. each prediction."""
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    label = np.asarray(label, dtype=np.float64).reshape(-1)
    _require_batch(pred)
    p = np.clip(pred, CLAMP, 1.0 - CLAMP)
    per_sample = -(label * np.log(p) + (1.0 - label) * np.log1p(-p))
    interior = (pred > CLAMP) & (pred < 1.0 - CLAMP)
    dper = np.where(interior, (p - label) / (p * (1.0 - p)), 0.0)
    return per_sample, dper


def bce_loss(pred, label, weight=None):
    """Binary cross entropy on probabilities, optionally sample-weighted.

    With weights the result is sum(w * l) / sum(w), so a one-hot weight
    vector reduces to the mean over the selected samples and an all-zero
    weight vector yields loss 0 with zero gradient.
    """
    pred = np.asarray(pred, dtype=np.float64)
    shape = pred.shape
    pred = pred.reshape(-1)
    label = np.asarray(label, dtype=np.float64).reshape(-1)
    _require_batch(pred)
    p = np.clip(pred, CLAMP, 1.0 - CLAMP)
    per_sample = -(label * np.log(p) + (1.0 - label) * np.log1p(-p))
    interior = (pred > CLAMP) & (pred < 1.0 - CLAMP)
    dper = np.where(interior, (p - label) / (p * (1.0 - p)), 0.0)
    if weight is None:
        return float(per_sample.mean()), (dper / pred.size).reshape(shape)
    weight = np.asarray(weight, dtype=np.float64).reshape(-1)
    if np.any(weight < 0):
        raise ValueError("sample weights must be non-negative")
    total = weight.sum()
    if total == 0.0:
        return 0.0, np.zeros(shape)
    return float((weight * per_sample).sum() / total), ((weight / total) * dper).reshape(shape)


def ce_loss(probs, label, weight=None):
    """Cross entropy on a (batch, classes) probability matrix.

    label holds integer class indices. Returns the (weighted) mean of
    -log(p[class]) and the gradient w.r.t. the full probability matrix.
    """
    probs = np.asarray(probs, dtype=np.float64)
    label = np.asarray(label)
    if probs.ndim != 2:
        raise ValueError(f"probs must be (batch, classes), got {probs.shape}")
    _require_batch(probs)
    n, n_classes = probs.shape
    if np.any(label < 0) or np.any(label >= n_classes):
        raise ValueError("class index out of range")
    rows = np.arange(n)
    picked = probs[rows, label]
    p = np.clip(picked, CLAMP, 1.0 - CLAMP)
    per_sample = -np.log(p)
    interior = (picked > CLAMP) & (picked < 1.0 - CLAMP)
    dpicked = np.where(interior, -1.0 / p, 0.0)
    grad = np.zeros_like(probs)
    if weight is None:
        grad[rows, label] = dpicked / n
        return float(per_sample.mean()), grad
    weight = np.asarray(weight, dtype=np.float64).reshape(-1)
    if np.any(weight < 0):
        raise ValueError("sample weights must be non-negative")
    total = weight.sum()
    if total == 0.0:
        return 0.0, grad
    grad[rows, label] = (weight / total) * dpicked
    return float((weight * per_sample).sum() / total), grad


def compute_loss(pred, label, kind, weight=None):
    """Dispatch by kind: "rul_rmse", "rul_mae", "bce" or "ce"."""
    if kind == "rul_rmse":
        return rmse_loss(pred, label)
    if kind == "rul_mae":
        return mae_loss(pred, label)
    if kind == "bce":
        return bce_loss(pred, label, weight)
    if kind == "ce":
        return ce_loss(pred, label, weight)
    raise ValueError(f"unknown loss kind {kind!r}")
