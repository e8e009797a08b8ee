"""Evaluation metrics: RMSE, the asymmetric prognostics score, the
probe-based domain divergence, PCA projection and cluster silhouettes."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .nn.init import xavier_init
from .nn.layers import Dense, ReLU, Sequential, Sigmoid
from .nn.losses import bce_loss
from .nn.optim import MomentumSGD


def rmse(pred, true):
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    true = np.asarray(true, dtype=np.float64).reshape(-1)
    if pred.size == 0 or pred.size != true.size:
        raise ValueError("need equal-length non-empty prediction/label lists")
    return float(np.sqrt(np.mean((pred - true) ** 2)))


def nasa_score(pred_cycles, true_cycles):
    """Total and mean exp(alpha |err|) with the over-estimation side of the
    error (predicted life longer than actual) penalized at 1/10 against
    1/13 for under-estimation. Errors are in cycles; a perfect prediction
    contributes exp(0) = 1, so the mean is >= 1 by construction.
    """
    pred = np.asarray(pred_cycles, dtype=np.float64).reshape(-1)
    true = np.asarray(true_cycles, dtype=np.float64).reshape(-1)
    if pred.size == 0 or pred.size != true.size:
        raise ValueError("need equal-length non-empty prediction/label lists")
    err = pred - true
    alpha = np.where(err >= 0.0, 1.0 / 10.0, 1.0 / 13.0)
    terms = np.exp(alpha * np.abs(err))
    total = float(terms.sum())
    return total, total / pred.size


def pad_from_error(error_rate):
    """2 (1 - 2 eps), clamped into [0, 2]."""
    return float(np.clip(2.0 * (1.0 - 2.0 * error_rate), 0.0, 2.0))


@dataclass(frozen=True)
class ProbeConfig:
    """Fixed recipe for the domain-separation probe."""

    epochs: int = 200
    lr: float = 0.01
    momentum: float = 0.9
    train_fraction: float = 0.8
    seeds: tuple = (0, 1, 2, 3, 4)
    max_per_domain: int = 2000
    subsample_seed: int = 9173


def _probe_head(embed_dim, rng):
    return xavier_init(
        Sequential(Dense(embed_dim, 30), ReLU(), Dense(30, 1), Sigmoid()), rng
    )


def proxy_a_distance(source_emb, target_emb, probe=None):
    """Domain divergence from a freshly trained separation probe.

    Both embedding sets are balanced to equal size, split 80/20 per
    domain, and a small classifier is trained from scratch; the held-out
    error rate eps gives 2(1 - 2 eps), clamped to [0, 2]. The median over
    the probe seeds is returned.
    """
    probe = probe or ProbeConfig()
    s = np.asarray(source_emb, dtype=np.float64)
    t = np.asarray(target_emb, dtype=np.float64)
    if s.shape[0] < 10 or t.shape[0] < 10:
        raise ValueError("need at least 10 embeddings per domain")
    sub_rng = np.random.default_rng(probe.subsample_seed)
    n = min(s.shape[0], t.shape[0], probe.max_per_domain)
    s = s[sub_rng.choice(s.shape[0], size=n, replace=False)]
    t = t[sub_rng.choice(t.shape[0], size=n, replace=False)]

    values = []
    for seed in probe.seeds:
        rng = np.random.default_rng(np.random.SeedSequence([probe.subsample_seed, seed]))
        n_train = int(round(probe.train_fraction * n))
        perm_s, perm_t = rng.permutation(n), rng.permutation(n)
        x_train = np.concatenate([s[perm_s[:n_train]], t[perm_t[:n_train]]])
        y_train = np.concatenate([np.zeros(n_train), np.ones(n_train)])
        x_test = np.concatenate([s[perm_s[n_train:]], t[perm_t[n_train:]]])
        y_test = np.concatenate([np.zeros(n - n_train), np.ones(n - n_train)])

        head = _probe_head(s.shape[1], rng)
        opt = MomentumSGD(head.params(), lr=probe.lr, momentum=probe.momentum)
        for _ in range(probe.epochs):
            out = head.forward(x_train)
            _, grad = bce_loss(out, y_train)
            head.backward(grad)
            opt.step()
            opt.zero_grad()
        pred = (head.forward(x_test)[:, 0] > 0.5).astype(np.float64)
        eps = float(np.mean(pred != y_test))
        values.append(pad_from_error(eps))
    return float(np.median(values))


def pca_project(embeddings, k=2):
    """Project onto the top-k principal axes of the centered data.

    Returns (coords (n, k), explained_variance_ratio (k,), components
    (k, d)). Components are orthonormal with a deterministic sign (their
    largest-magnitude entry is positive). If the data has rank < k the
    trailing components and coordinates are zero-padded.
    """
    x = np.asarray(embeddings, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < k:
        raise ValueError(f"need at least {k} rows of embeddings, got {x.shape}")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / x.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    eigvecs = eigvecs[:, order]
    total = eigvals.sum()
    rank_tol = eigvals[0] * 1e-12 if eigvals.size else 0.0
    components = np.zeros((k, x.shape[1]))
    explained = np.zeros(k)
    for i in range(k):
        if eigvals[i] > rank_tol:
            v = eigvecs[:, i]
            pivot = np.argmax(np.abs(v))
            components[i] = v if v[pivot] >= 0 else -v
            explained[i] = eigvals[i] / total if total > 0 else 0.0
    coords = centered @ components.T
    return coords, explained, components


def silhouette(points, labels, max_points=2000, seed=0):
    """Mean silhouette of the labeling: (b - a) / max(a, b) per point.

    a is the mean distance to other points of the same label, b the
    smallest mean distance to another label's points. Points are
    deterministically subsampled beyond max_points.
    """
    x = np.asarray(points, dtype=np.float64)
    labels = np.asarray(labels)
    if x.shape[0] != labels.size:
        raise ValueError("points and labels must align")
    if x.shape[0] > max_points:
        idx = np.random.default_rng(seed).choice(x.shape[0], size=max_points, replace=False)
        x, labels = x[idx], labels[idx]
    classes = np.unique(labels)
    if classes.size < 2:
        raise ValueError("need at least two labels for a silhouette")
    dists = cdist(x, x)
    scores = np.zeros(x.shape[0])
    for i in range(x.shape[0]):
        own = labels == labels[i]
        n_own = own.sum()
        if n_own < 2:
            continue
        a = dists[i, own].sum() / (n_own - 1)
        b = min(dists[i, labels == c].mean() for c in classes if c != labels[i])
        scores[i] = (b - a) / max(a, b)
    return float(scores.mean())
