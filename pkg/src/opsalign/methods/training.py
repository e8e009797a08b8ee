"""The seven training procedures over a shared deterministic loop.

Every adversarial step forwards the concatenated source+target batch
through the feature extractor once; gradient contributions from the
regression head (source rows only), the domain head(s) (through the
reversal layer) and the phase head accumulate into one feature gradient
before the single extractor backward pass. Batches, shuffling and
initialization all derive from per-purpose child seeds, so runs are
bit-reproducible and reduced configurations (single head, zero reversal,
zero trade-off) reproduce their simpler counterparts exactly.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..nn.losses import bce_loss, bce_elements, ce_loss, compute_loss
from ..nn.optim import MomentumSGD
from ..nn.schedules import annealed_lr, reversal_strength
from .mmd import MmdConfig, mk_mmd_with_grad
from .models import METHODS, ModelBundle, build_model

ADVERSARIAL = ("dann", "ops-dann-hard", "ops-dann-soft", "multiclass-ops-dann")
NEEDS_TARGET = ADVERSARIAL + ("mk-mmd", "adabn")


@dataclass(frozen=True)
class TrainConfig:
    method: str
    epochs: int
    batch_size: int = 256
    base_lr: float = 0.01
    momentum: float = 0.9
    lambda_domain: float = 1.0
    lambda_phase: float = 1.0
    n_phases: int = 3
    rul_loss: str = "rul_rmse"      # or "rul_mae"
    seed: int = 0
    soft_gate: str = "predicted"    # or "oracle": gate by the hard labels
    soft_gate_coupled: bool = False  # let gate weights backpropagate into the phase head
    phase_head_on_source_only: bool = False
    mmd: MmdConfig = field(default_factory=MmdConfig)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 2:
            raise ValueError("batch size must be >= 2")
        if self.soft_gate not in ("predicted", "oracle"):
            raise ValueError("soft_gate must be 'predicted' or 'oracle'")


def default_epochs(method, source_class, target_class):
    """Per-task epoch counts: baselines train longer on the small domains."""
    if method in ("source-only",):
        return 40 if source_class == "short" else 20
    if source_class == "short" and target_class == "medium":
        return 25
    return 15


@dataclass
class TrainResult:
    bundle: ModelBundle
    epoch_trace: list
    step_trace: list
    config: TrainConfig


class _BatchCycler:
    """Endless shuffled full batches over a bank (target side)."""

    def __init__(self, n, batch_size, rng):
        self.n = n
        self.batch = min(batch_size, n)
        self.rng = rng
        self._order = None
        self._pos = 0

    def next(self):
        if self._order is None or self._pos + self.batch > self.n:
            self._order = self.rng.permutation(self.n)
            self._pos = 0
        idx = self._order[self._pos:self._pos + self.batch]
        self._pos += self.batch
        return idx


def _domain_rngs(seed):
    src = np.random.default_rng(np.random.SeedSequence([seed, 11]))
    tgt = np.random.default_rng(np.random.SeedSequence([seed, 22]))
    return src, tgt


def _phase_assignment(phases, n_phases):
    if n_phases == 1:
        return np.zeros(phases.size, dtype=np.int8)
    return phases


# --- per-step objective evaluations (forward + backward, no optimizer) ---

def step_losses(bundle, config, xs, ys, phase_s=None, xt=None, phase_t=None, rho=0.0):
    """One training step's forward/backward; gradients accumulate in place.

    Returns the component losses and "total", the scalar actually
    differentiated. Reusable standalone for gradient verification.
    """
    method = config.method
    fe, reg = bundle.feature_extractor, bundle.regressor
    ns = xs.shape[0]

    if method in ("source-only", "adabn"):
        feats = fe.forward(xs, train=True)
        yhat = reg.forward(feats, train=True)
        loss_y, dy = compute_loss(yhat, ys, config.rul_loss)
        fe.backward(reg.backward(dy))
        return {"total": loss_y, "rul": loss_y}

    x = np.concatenate([xs, xt], axis=0)
    n = x.shape[0]
    feats = fe.forward(x, train=True)
    d_feat = np.zeros_like(feats)

    yhat = reg.forward(feats[:ns], train=True)
    loss_y, dy = compute_loss(yhat, ys, config.rul_loss)
    d_feat[:ns] += reg.backward(dy)
    losses = {"rul": loss_y}
    total = loss_y

    if method == "mk-mmd":
        mmd, g_s, g_t = mk_mmd_with_grad(feats[:ns], feats[ns:], config.mmd)
        w = config.mmd.weight
        d_feat[:ns] += w * g_s
        d_feat[ns:] += w * g_t
        losses["mmd"] = mmd
        total = total + w * mmd
    else:
        bundle.set_reversal(rho)
        domain_labels = np.concatenate([np.zeros(ns), np.ones(n - ns)])
        lam = config.lambda_domain

        if method == "dann":
            head = bundle.discriminators[0]
            dhat = head.forward(feats, train=True)
            loss_d, dd = bce_loss(dhat, domain_labels)
            d_feat += head.backward(lam * dd)
            losses["domain"] = loss_d
            total = total + lam * loss_d

        elif method == "multiclass-ops-dann":
            head = bundle.discriminators[0]
            classes = np.concatenate([phase_s, 3 + phase_t]).astype(np.int64)
            probs = head.forward(feats, train=True)
            loss_d, dprobs = ce_loss(probs, classes)
            d_feat += head.backward(lam * dprobs)
            losses["domain"] = loss_d
            total = total + lam * loss_d

        else:  # phase-gated variants
            assign = _phase_assignment(
                np.concatenate([phase_s, phase_t]), config.n_phases
            )
            if method == "ops-dann-hard":
                gate = None
            else:
                probs = bundle.phase_classifier.forward(feats, train=True)
                if config.phase_head_on_source_only:
                    loss_z, dsub = ce_loss(probs[:ns], assign[:ns])
                    dprobs = np.zeros_like(probs)
                    dprobs[:ns] = dsub
                else:
                    loss_z, dprobs = ce_loss(probs, assign)
                dprobs = config.lambda_phase * dprobs
                losses["phase"] = loss_z
                total = total + config.lambda_phase * loss_z
                if config.soft_gate == "oracle":
                    gate = np.zeros((n, config.n_phases))
                    gate[np.arange(n), assign] = 1.0
                else:
                    gate = probs.copy()  # detached from the gating path

            loss_dom = 0.0
            dgate = np.zeros((n, config.n_phases)) if (gate is not None and config.soft_gate_coupled) else None
            for i, head in enumerate(bundle.discriminators):
                weights = (assign == i).astype(np.float64) if gate is None else gate[:, i]
                dhat = head.forward(feats, train=True)
                loss_i, dd = bce_loss(dhat, domain_labels, weight=weights)
                d_feat += head.backward(lam * dd)
                losses[f"domain{i}"] = loss_i
                loss_dom += loss_i
                if dgate is not None and config.soft_gate == "predicted":
                    wsum = weights.sum()
                    if wsum > 0.0:
                        per, _ = bce_elements(dhat, domain_labels)
                        dgate[:, i] += lam * (per - loss_i) / wsum
            if dgate is not None and config.soft_gate == "predicted":
                dprobs = dprobs + dgate
            if method == "ops-dann-soft":
                d_feat += bundle.phase_classifier.backward(dprobs)
            losses["domain"] = loss_dom
            total = total + lam * loss_dom

    fe.backward(d_feat)
    losses["total"] = total
    return losses


# --- the training loop ---

def _fit(bundle, source_bank, target_bank, config):
    if len(source_bank) == 0:
        raise ValueError("empty source dataset")
    if source_bank.rul is None:
        raise ValueError("source windows must carry RUL labels")
    needs_target = config.method in NEEDS_TARGET and config.method != "adabn"
    if needs_target and (target_bank is None or len(target_bank) == 0):
        raise ValueError("this method needs a non-empty target domain")

    params = bundle.trainable_params()
    opt = MomentumSGD(params, lr=config.base_lr, momentum=config.momentum)
    rng_src, rng_tgt = _domain_rngs(config.seed)

    n_src = len(source_bank)
    batch = min(config.batch_size, n_src)
    steps_per_epoch = max(n_src // batch, 1)
    total_steps = config.epochs * steps_per_epoch
    cycler = _BatchCycler(len(target_bank), config.batch_size, rng_tgt) if needs_target else None

    adversarial = config.method in ADVERSARIAL
    epoch_trace, step_trace = [], []
    done = 0
    for epoch in range(config.epochs):
        lr = annealed_lr(done / total_steps, config.base_lr)
        opt.lr = lr
        order = rng_src.permutation(n_src)
        sums, counts = {}, 0
        rho = 0.0
        for s in range(steps_per_epoch):
            idx_s = order[s * batch:(s + 1) * batch]
            xs = source_bank.gather(idx_s)
            ys = source_bank.rul[idx_s]
            phase_s = source_bank.phase[idx_s]
            xt = phase_t = None
            if needs_target:
                idx_t = cycler.next()
                xt = target_bank.gather(idx_t)
                phase_t = target_bank.phase[idx_t]
            rho = reversal_strength(done / total_steps) if adversarial else 0.0
            losses = step_losses(bundle, config, xs, ys, phase_s, xt, phase_t, rho)
            if not np.isfinite(losses["total"]):
                raise ValueError(
                    f"non-finite training loss at epoch {epoch} step {s}: {losses}"
                )
            opt.step()
            opt.zero_grad()
            done += 1
            step_trace.append({"epoch": epoch, "step": s, "lr": lr, "rho": rho, **losses})
            for k, v in losses.items():
                sums[k] = sums.get(k, 0.0) + v
            counts += 1
        epoch_trace.append({
            "epoch": epoch, "lr": lr, "rho": rho,
            **{k: v / counts for k, v in sums.items()},
        })
    return TrainResult(bundle=bundle, epoch_trace=epoch_trace, step_trace=step_trace, config=config)


def train(source_bank, target_bank, config):
    """Build, train and (for batch-norm adaptation) adapt one model."""
    bundle = build_model(config.method, config.seed, n_phases=config.n_phases)
    result = _fit(bundle, source_bank, target_bank, config)
    if config.method == "adabn":
        if target_bank is None or len(target_bank) == 0:
            raise ValueError("batch-norm adaptation needs a non-empty target domain")
        adapt_batchnorm_statistics(bundle, target_bank)
    return result


def train_source_only(source_bank, config):
    return train(source_bank, None, replace(config, method="source-only"))


def train_dann(source_bank, target_bank, config):
    return train(source_bank, target_bank, replace(config, method="dann"))


def train_ops_dann_hard(source_bank, target_bank, config):
    return train(source_bank, target_bank, replace(config, method="ops-dann-hard"))


def train_ops_dann_soft(source_bank, target_bank, config):
    return train(source_bank, target_bank, replace(config, method="ops-dann-soft"))


def train_multiclass_ops_dann(source_bank, target_bank, config):
    return train(source_bank, target_bank, replace(config, method="multiclass-ops-dann"))


def train_mkmmd(source_bank, target_bank, config, mmd_config=None):
    if mmd_config is not None:
        config = replace(config, mmd=mmd_config)
    return train(source_bank, target_bank, replace(config, method="mk-mmd"))


def train_adabn(source_bank, target_bank, config):
    return train(source_bank, target_bank, replace(config, method="adabn"))


# --- batch-norm adaptation and inference ---

def adapt_batchnorm_statistics(bundle, target_bank, chunk=2048):
    """Swap every batch-norm layer's statistics for exact target statistics.

    Layer by layer: stream all target windows through the stack in eval
    mode up to the batch-norm being refreshed (earlier layers already use
    their new statistics), accumulate the exact per-channel mean/variance
    of its input, and overwrite the running buffers. No weight changes.
    """
    layers = bundle.feature_extractor.layers
    bn_positions = [i for i, l in enumerate(layers) if hasattr(l, "set_statistics")]
    if not bn_positions:
        raise ValueError("model has no batch-norm layers to adapt")
    n = len(target_bank)
    for pos in bn_positions:
        total = 0
        s1 = s2 = 0.0
        for lo in range(0, n, chunk):
            idx = np.arange(lo, min(lo + chunk, n))
            h = target_bank.gather(idx)
            for l in layers[:pos]:
                h = l.forward(h, train=False)
            s1 = s1 + h.sum(axis=(0, 2))
            s2 = s2 + (h * h).sum(axis=(0, 2))
            total += h.shape[0] * h.shape[2]
        mean = s1 / total
        var = s2 / total - mean * mean
        layers[pos].set_statistics(mean, np.maximum(var, 0.0))
    return bundle


def _check_trained(bundle):
    for p in bundle.trainable_params():
        if not np.isfinite(p.value).all():
            raise ValueError("model has non-finite parameters")


def predict_rul(bundle, bank, chunk=4096):
    """Normalized RUL predictions in (0, 1) plus cycle-valued predictions.

    Cycle values multiply by each window's unit (eol - onset) span; NaN
    where the span is unknown.
    """
    yhat = extract_outputs(bundle, bank, bundle.regressor, chunk)[:, 0]
    spans = bank.window_spans()
    return yhat, yhat * spans


def extract_features(bundle, bank, chunk=4096, idx=None):
    """Embeddings from the feature extractor, eval mode."""
    _check_trained(bundle)
    sel = np.arange(len(bank)) if idx is None else np.asarray(idx)
    out = []
    for lo in range(0, sel.size, chunk):
        x = bank.gather(sel[lo:lo + chunk])
        out.append(bundle.feature_extractor.forward(x, train=False))
    return np.concatenate(out, axis=0)


def extract_outputs(bundle, bank, head, chunk=4096):
    _check_trained(bundle)
    out = []
    for lo in range(0, len(bank), chunk):
        x = bank.gather(np.arange(lo, min(lo + chunk, len(bank))))
        feats = bundle.feature_extractor.forward(x, train=False)
        out.append(head.forward(feats, train=False))
    return np.concatenate(out, axis=0)
