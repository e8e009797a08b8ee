"""NumPy implementation of the 1D convolution kernels.

This is the pure-Python fallback backend. It lowers the convolution to a
BLAS matmul via a strided column view of the padded input.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def same_padding(kernel_size):
    """Left/right zero padding so the output keeps the input length.

    For even kernels the split is asymmetric: (k-1)//2 left, k//2 right,
    e.g. kernel 10 pads 4 left and 5 right.
    """
    left = (kernel_size - 1) // 2
    return left, kernel_size - 1 - left


def _columns(x, kernel_size):
    left, right = same_padding(kernel_size)
    xp = np.pad(x, ((0, 0), (0, 0), (left, right)))
    # (batch, channels, time, kernel) view; cols[b, c, t, k] = xp[b, c, t + k]
    return sliding_window_view(xp, kernel_size, axis=2)


def conv1d_forward(x, weight, bias):
    """Cross-correlate x (B, C, N) with weight (O, C, K); returns (B, O, N)."""
    cols = _columns(x, weight.shape[2])
    y = np.tensordot(cols, weight, axes=([1, 3], [1, 2]))  # (B, N, O)
    y = np.ascontiguousarray(y.transpose(0, 2, 1))
    y += bias[None, :, None]
    return y


def conv1d_backward(x, weight, grad_out):
    """Gradients of conv1d_forward w.r.t. input, weight and bias.

    grad_out has the output shape (B, O, N). Returns (dx, dweight, dbias).
    """
    batch, channels, length = x.shape
    kernel_size = weight.shape[2]
    left, right = same_padding(kernel_size)
    cols = _columns(x, kernel_size)

    dbias = grad_out.sum(axis=(0, 2))
    dweight = np.tensordot(grad_out, cols, axes=([0, 2], [0, 2]))  # (O, C, K)

    # dxp[b, c, t + k] += sum_o grad_out[b, o, t] * weight[o, c, k]
    dcols = np.tensordot(grad_out, weight, axes=([1], [0]))  # (B, N, C, K)
    dxp = np.zeros((batch, channels, length + kernel_size - 1))
    for k in range(kernel_size):
        dxp[:, :, k:k + length] += dcols[:, :, :, k].transpose(0, 2, 1)
    dx = dxp[:, :, left:left + length]
    return np.ascontiguousarray(dx), dweight, dbias
