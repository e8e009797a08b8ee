# Compiled conv kernels: direct cross-correlation without the column-matrix
# materialization the NumPy backend needs. Single-threaded on purpose so
# results are reproducible bit-for-bit across runs.

import numpy as np

cimport numpy as cnp

cnp.import_array()


def same_padding(Py_ssize_t kernel_size):
    cdef Py_ssize_t left = (kernel_size - 1) // 2
    return left, kernel_size - 1 - left


def conv1d_forward(cnp.ndarray x_arr, cnp.ndarray w_arr, cnp.ndarray b_arr):
    """Cross-correlate x (B, C, N) with weight (O, C, K); returns (B, O, N)."""
    cdef double[:, :, ::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef double[:, :, ::1] w = np.ascontiguousarray(w_arr, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(b_arr, dtype=np.float64)

    cdef Py_ssize_t batch = x.shape[0], channels = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t out_ch = w.shape[0], kernel = w.shape[2]
    cdef Py_ssize_t pad_left = (kernel - 1) // 2

    out_arr = np.empty((batch, out_ch, length), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr

    cdef Py_ssize_t n, o, c, k, t, t0, t1, shift
    cdef double wv, bv
    for n in range(batch):
        for o in range(out_ch):
            bv = b[o]
            for t in range(length):
                out[n, o, t] = bv
            for c in range(channels):
                for k in range(kernel):
                    wv = w[o, c, k]
                    shift = k - pad_left
                    t0 = -shift if shift < 0 else 0
                    t1 = length - shift if shift > 0 else length
                    for t in range(t0, t1):
                        out[n, o, t] += wv * x[n, c, t + shift]
    return out_arr


def conv1d_backward(cnp.ndarray x_arr, cnp.ndarray w_arr, cnp.ndarray dy_arr):
    """Gradients of conv1d_forward; returns (dx, dweight, dbias)."""
    cdef double[:, :, ::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef double[:, :, ::1] w = np.ascontiguousarray(w_arr, dtype=np.float64)
    cdef double[:, :, ::1] dy = np.ascontiguousarray(dy_arr, dtype=np.float64)

    cdef Py_ssize_t batch = x.shape[0], channels = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t out_ch = w.shape[0], kernel = w.shape[2]
    cdef Py_ssize_t pad_left = (kernel - 1) // 2

    dx_arr = np.zeros((batch, channels, length), dtype=np.float64)
    dw_arr = np.zeros((out_ch, channels, kernel), dtype=np.float64)
    db_arr = np.zeros(out_ch, dtype=np.float64)
    cdef double[:, :, ::1] dx = dx_arr
    cdef double[:, :, ::1] dw = dw_arr
    cdef double[::1] db = db_arr

    cdef Py_ssize_t n, o, c, k, t, t0, t1, shift
    cdef double acc, wv
    for n in range(batch):
        for o in range(out_ch):
            acc = 0.0
            for t in range(length):
                acc += dy[n, o, t]
            db[o] += acc
            for c in range(channels):
                for k in range(kernel):
                    shift = k - pad_left
                    t0 = -shift if shift < 0 else 0
                    t1 = length - shift if shift > 0 else length
                    wv = w[o, c, k]
                    acc = 0.0
                    for t in range(t0, t1):
                        acc += dy[n, o, t] * x[n, c, t + shift]
                        dx[n, c, t + shift] += wv * dy[n, o, t]
                    dw[o, c, k] += acc
    return dx_arr, dw_arr, db_arr
