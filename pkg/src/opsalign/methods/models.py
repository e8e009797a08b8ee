"""Model assembly for the adaptation methods.

All methods share one backbone: a 3-layer 1D conv feature extractor
producing a 50-dimensional embedding per window, and a 2-layer regression
head squashed to (0, 1). Adversarial heads hang off the embedding through
a gradient reversal layer; the phase classifier attaches directly.
"""

from dataclasses import dataclass, field

import numpy as np

from ..nn.init import xavier_init
from ..nn.layers import (
    BatchNorm1d,
    Conv1d,
    Dense,
    Flatten,
    GradientReversal,
    ReLU,
    Sequential,
    Sigmoid,
    Softmax,
)
from ..nn.serialize import load_arrays, save_arrays

METHODS = (
    "source-only",
    "dann",
    "ops-dann-hard",
    "ops-dann-soft",
    "multiclass-ops-dann",
    "mk-mmd",
    "adabn",
)

EMBED_DIM = 50
N_DOMAIN_PHASE_CLASSES = 6  # (source|target) x (ascending|steady|descending)


def make_feature_extractor(with_batchnorm=False):
    channels = [(18, 10), (10, 10), (10, 1)]
    layers = []
    for cin, cout in channels:
        layers.append(Conv1d(cin, cout, 10))
        if with_batchnorm:
            layers.append(BatchNorm1d(cout))
        layers.append(ReLU())
    layers.append(Flatten())
    return Sequential(*layers)


def make_regressor():
    return Sequential(Dense(EMBED_DIM, 50), ReLU(), Dense(50, 1), Sigmoid())


def make_domain_discriminator():
    return Sequential(
        GradientReversal(0.0),
        Dense(EMBED_DIM, 50), ReLU(),
        Dense(50, 30), ReLU(),
        Dense(30, 1), Sigmoid(),
    )


def make_domain_phase_discriminator():
    return Sequential(
        GradientReversal(0.0),
        Dense(EMBED_DIM, 50), ReLU(),
        Dense(50, 30), ReLU(),
        Dense(30, N_DOMAIN_PHASE_CLASSES), Softmax(),
    )


def make_phase_classifier():
    return Sequential(
        Dense(EMBED_DIM, 50), ReLU(),
        Dense(50, 30), ReLU(),
        Dense(30, 3), Softmax(),
    )


@dataclass
class ModelBundle:
    method: str
    feature_extractor: Sequential
    regressor: Sequential
    discriminators: list = field(default_factory=list)
    phase_classifier: Sequential = None
    n_phases: int = 3

    def components(self):
        out = {"feature_extractor": self.feature_extractor, "regressor": self.regressor}
        for i, d in enumerate(self.discriminators):
            out[f"discriminator{i}"] = d
        if self.phase_classifier is not None:
            out["phase_classifier"] = self.phase_classifier
        return out

    def trainable_params(self):
        params = []
        for comp in self.components().values():
            params.extend(comp.params())
        return params

    def n_params(self):
        return sum(p.size for p in self.trainable_params())

    def set_reversal(self, strength):
        for disc in self.discriminators:
            head = disc.layers[0]
            if isinstance(head, GradientReversal):
                head.strength = strength

    def batchnorm_layers(self):
        return [l for l in self.feature_extractor.layers if isinstance(l, BatchNorm1d)]

    def state(self):
        entries = []
        for name, comp in self.components().items():
            for sub, arr in comp.state():
                entries.append((f"{name}.{sub}", arr))
        return entries

    def save(self, path):
        save_arrays(path, self.state())

    def load(self, path):
        data = load_arrays(path)
        for name, arr in self.state():
            if name not in data:
                raise ValueError(f"checkpoint missing array {name!r}")
            if data[name].shape != arr.shape:
                raise ValueError(
                    f"checkpoint shape mismatch for {name!r}: "
                    f"{data[name].shape} vs {arr.shape}"
                )
            arr[...] = data[name]
        return self


def build_model(method, seed, n_phases=3):
    """Xavier-initialized bundle for one method.

    Each component draws from its own child seed, so methods sharing a
    component (e.g. the feature extractor) start from identical values
    under the same seed regardless of which other heads exist.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    children = np.random.SeedSequence(seed).spawn(6)
    rng = lambda i: np.random.default_rng(children[i])

    fe = xavier_init(make_feature_extractor(with_batchnorm=(method == "adabn")), rng(0))
    reg = xavier_init(make_regressor(), rng(1))
    discriminators, phase_clf = [], None

    if method == "dann":
        discriminators = [xavier_init(make_domain_discriminator(), rng(2))]
    elif method in ("ops-dann-hard", "ops-dann-soft"):
        if n_phases not in (1, 3):
            raise ValueError("phase-gated methods support 1 or 3 phases")
        discriminators = [
            xavier_init(make_domain_discriminator(), rng(2 + i)) for i in range(n_phases)
        ]
        if method == "ops-dann-soft":
            phase_clf = xavier_init(make_phase_classifier(), rng(5))
    elif method == "multiclass-ops-dann":
        discriminators = [xavier_init(make_domain_phase_discriminator(), rng(2))]

    return ModelBundle(
        method=method,
        feature_extractor=fe,
        regressor=reg,
        discriminators=discriminators,
        phase_classifier=phase_clf,
        n_phases=n_phases,
    )
