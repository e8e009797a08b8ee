"""Xavier-normal initialization for layer stacks."""

import numpy as np

from .layers import BatchNorm1d, Conv1d, Dense, Sequential


def _fans(layer):
    if isinstance(layer, Conv1d):
        out_ch, in_ch, k = layer.weight.shape
        return in_ch * k, out_ch * k
    if isinstance(layer, Dense):
        out_f, in_f = layer.weight.shape
        return in_f, out_f
    raise TypeError(f"no fan definition for {type(layer).__name__}")


def xavier_init(stack, rng):
    """Initialize a Sequential in place.

    Weights are drawn from N(0, 2/(fan_in + fan_out)); biases are zeroed.
    Batch-norm layers reset to identity statistics. Deterministic for a
    given Generator state, with draws in layer order.
    """
    if isinstance(stack, Sequential):
        layers = stack.layers
    else:
        layers = [stack]
    for layer in layers:
        if isinstance(layer, Sequential):
            xavier_init(layer, rng)
        elif isinstance(layer, (Conv1d, Dense)):
            fan_in, fan_out = _fans(layer)
            std = np.sqrt(2.0 / (fan_in + fan_out))
            layer.weight.value[...] = rng.normal(0.0, std, size=layer.weight.shape)
            layer.bias.value[...] = 0.0
        elif isinstance(layer, BatchNorm1d):
            layer.scale.value[...] = 1.0
            layer.shift.value[...] = 0.0
            layer.running_mean[...] = 0.0
            layer.running_var[...] = 1.0
    return stack
