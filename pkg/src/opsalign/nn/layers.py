"""Layers with hand-derived backward rules.

There is no autodiff graph: each layer caches what its backward pass needs
during forward, and training code calls backward in reverse order. Layers
are therefore stateful and single-threaded by contract. Gradients
accumulate into Param.grad until the optimizer clears them.
"""

import numpy as np

from . import backend


class Param:
    """A learnable array paired with an accumulated-gradient buffer."""

    __slots__ = ("value", "grad", "name")

    def __init__(self, value, name=""):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.name = name

    @property
    def shape(self):
        return self.value.shape

    @property
    def size(self):
        return self.value.size

    def zero_grad(self):
        self.grad[...] = 0.0


def _check_finite(arr, where):
    if not np.isfinite(arr).all():
        raise ValueError(f"non-finite values in {where}")


class Layer:
    def params(self):
        return []

    def state(self):
        """Ordered (name, array) pairs to persist: params plus any buffers."""
        return [(p.name or f"param{i}", p.value) for i, p in enumerate(self.params())]

    def forward(self, x, train=False):
        raise NotImplementedError

    def backward(self, grad_out):
        raise NotImplementedError

    def __call__(self, x, train=False):
        return self.forward(x, train=train)

    def n_params(self):
        return sum(p.size for p in self.params())


class Conv1d(Layer):
    """1D cross-correlation over the time axis, stride 1, 'same' padding.

    Weight shape is (out_channels, in_channels, kernel_size); the output
    keeps the input time length (kernel 10 pads 4 left / 5 right).
    """

    def __init__(self, in_channels, out_channels, kernel_size):
        self.in_channels = in_channels
        self.weight = Param(np.zeros((out_channels, in_channels, kernel_size)), "weight")
        self.bias = Param(np.zeros(out_channels), "bias")
        self._x = None

    def params(self):
        return [self.weight, self.bias]

    def forward(self, x, train=False):
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[1] != self.in_channels:
            raise ValueError(
                f"conv input must be (batch, {self.in_channels}, time), got {x.shape}"
            )
        _check_finite(x, "conv input")
        self._x = x
        return backend.conv1d_forward(x, self.weight.value, self.bias.value)

    def backward(self, grad_out):
        dx, dw, db = backend.conv1d_backward(self._x, self.weight.value, grad_out)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class Dense(Layer):
    """Affine map y = x W^T + b on (batch, features) input."""

    def __init__(self, in_features, out_features):
        self.in_features = in_features
        self.weight = Param(np.zeros((out_features, in_features)), "weight")
        self.bias = Param(np.zeros(out_features), "bias")
        self._x = None

    def params(self):
        return [self.weight, self.bias]

    def forward(self, x, train=False):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise ValueError(
                f"dense input must be (batch, {self.in_features}), got {x.shape}"
            )
        _check_finite(x, "dense input")
        self._x = x
        return x @ self.weight.value.T + self.bias.value

    def backward(self, grad_out):
        self.weight.grad += grad_out.T @ self._x
        self.bias.grad += grad_out.sum(axis=0)
        return grad_out @ self.weight.value


class BatchNorm1d(Layer):
    """Per-channel batch normalization on (batch, channels, time) input.

    Train mode normalizes by the biased batch statistics over the batch and
    time axes and folds the same statistics into the running buffers with
    the configured momentum. Eval mode normalizes by the running buffers.
    """

    def __init__(self, channels, momentum=0.1, epsilon=1e-5):
        self.channels = channels
        self.momentum = momentum
        self.epsilon = epsilon
        self.scale = Param(np.ones(channels), "scale")
        self.shift = Param(np.zeros(channels), "shift")
        self.running_mean = np.zeros(channels)
        self.running_var = np.ones(channels)
        self._cache = None

    def params(self):
        return [self.scale, self.shift]

    def state(self):
        return [
            ("scale", self.scale.value),
            ("shift", self.shift.value),
            ("running_mean", self.running_mean),
            ("running_var", self.running_var),
        ]

    def set_statistics(self, mean, var):
        self.running_mean = np.asarray(mean, dtype=np.float64).copy()
        self.running_var = np.asarray(var, dtype=np.float64).copy()

    def forward(self, x, train=False):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[1] != self.channels:
            raise ValueError(
                f"batchnorm input must be (batch, {self.channels}, time), got {x.shape}"
            )
        if train:
            if x.shape[0] < 2:
                raise ValueError("batchnorm train mode needs batch size >= 2")
            mean = x.mean(axis=(0, 2))
            var = x.var(axis=(0, 2))
            self.running_mean = (1 - self.momentum) * self.running_mean + self.momentum * mean
            self.running_var = (1 - self.momentum) * self.running_var + self.momentum * var
        else:
            mean = self.running_mean
            var = self.running_var
        inv = 1.0 / np.sqrt(var + self.epsilon)
        xhat = (x - mean[None, :, None]) * inv[None, :, None]
        self._cache = (xhat, inv, train, x.shape[0] * x.shape[2])
        return self.scale.value[None, :, None] * xhat + self.shift.value[None, :, None]

    def backward(self, grad_out):
        xhat, inv, train, m = self._cache
        self.scale.grad += (grad_out * xhat).sum(axis=(0, 2))
        self.shift.grad += grad_out.sum(axis=(0, 2))
        dxhat = grad_out * self.scale.value[None, :, None]
        if not train:
            return dxhat * inv[None, :, None]
        sum_dxhat = dxhat.sum(axis=(0, 2), keepdims=True)
        sum_dxhat_xhat = (dxhat * xhat).sum(axis=(0, 2), keepdims=True)
        return (inv[None, :, None] / m) * (m * dxhat - sum_dxhat - xhat * sum_dxhat_xhat)


class ReLU(Layer):
    def __init__(self):
        self._mask = None

    def forward(self, x, train=False):
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad_out):
        return np.where(self._mask, grad_out, 0.0)


class Sigmoid(Layer):
    def __init__(self):
        self._y = None

    def forward(self, x, train=False):
        # Split by sign so neither exp overflows.
        y = np.empty_like(np.asarray(x, dtype=np.float64))
        pos = x >= 0
        y[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        y[~pos] = ex / (1.0 + ex)
        self._y = y
        return y

    def backward(self, grad_out):
        return grad_out * self._y * (1.0 - self._y)


class Softmax(Layer):
    """Softmax over the last axis; rows sum to one."""

    def __init__(self):
        self._y = None

    def forward(self, x, train=False):
        z = x - x.max(axis=-1, keepdims=True)
        e = np.exp(z)
        y = e / e.sum(axis=-1, keepdims=True)
        self._y = y
        return y

    def backward(self, grad_out):
        y = self._y
        inner = (grad_out * y).sum(axis=-1, keepdims=True)
        return y * (grad_out - inner)


class GradientReversal(Layer):
    """Identity forward; backward multiplies the gradient by -strength.

    strength is mutated by the training loop as the reversal schedule
    progresses. At strength 0 the upstream gradient is blocked entirely.
    """

    def __init__(self, strength=0.0):
        if strength < 0:
            raise ValueError("reversal strength must be >= 0")
        self.strength = strength

    def forward(self, x, train=False):
        return x

    def backward(self, grad_out):
        return -self.strength * grad_out


class Flatten(Layer):
    def __init__(self):
        self._shape = None

    def forward(self, x, train=False):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_out):
        return grad_out.reshape(self._shape)


class Sequential(Layer):
    def __init__(self, *layers):
        self.layers = list(layers)

    def params(self):
        out = []
        for layer in self.layers:
            out.extend(layer.params())
        return out

    def state(self):
        out = []
        for i, layer in enumerate(self.layers):
            for name, arr in layer.state():
                out.append((f"{i}.{name}", arr))
        return out

    def forward(self, x, train=False):
        for layer in self.layers:
            x = layer.forward(x, train=train)
        return x

    def backward(self, grad_out):
        for layer in reversed(self.layers):
            grad_out = layer.backward(grad_out)
        return grad_out
