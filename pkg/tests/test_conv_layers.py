import numpy as np
import pytest

from opsalign.nn import backend
from opsalign.nn.layers import Conv1d


def brute_force_conv1d(x, w, b):
    """Direct nested-loop cross-correlation with same padding; the oracle."""
    batch, channels, length = x.shape
    out_ch, _, kernel = w.shape
    pad_left = (kernel - 1) // 2
    y = np.zeros((batch, out_ch, length))
    for n in range(batch):
        for o in range(out_ch):
            for t in range(length):
                acc = b[o]
                for c in range(channels):
                    for k in range(kernel):
                        i = t - pad_left + k
                        if 0 <= i < length:
                            acc += w[o, c, k] * x[n, c, i]
                y[n, o, t] = acc
    return y


@pytest.fixture(params=backend.available_backends())
def impl(request):
    return backend.get_impl(request.param)


def test_kernel_one_scaling_identity(impl):
    x = np.array([[[1.0, 2.0, 3.0, 4.0, 5.0]]])
    w = np.array([[[2.0]]])
    b = np.zeros(1)
    y = impl.conv1d_forward(x, w, b)
    assert np.array_equal(y, np.array([[[2.0, 4.0, 6.0, 8.0, 10.0]]]))


def test_zero_input_gives_bias(impl):
    rng = np.random.default_rng(3)
    w = rng.normal(size=(4, 3, 10))
    b = rng.normal(size=4)
    y = impl.conv1d_forward(np.zeros((2, 3, 20)), w, b)
    assert np.allclose(y, b[None, :, None], atol=1e-15)


def test_matches_brute_force_oracle(impl):
    rng = np.random.default_rng(7)
    x = rng.normal(size=(2, 18, 50))
    w = rng.normal(size=(10, 18, 10))
    b = rng.normal(size=10)
    y = impl.conv1d_forward(x, w, b)
    ref = brute_force_conv1d(x, w, b)
    assert np.abs(y - ref).max() <= 1e-10 * np.abs(ref).max()


def test_same_padding_split():
    assert backend.same_padding(10) == (4, 5)
    assert backend.same_padding(3) == (1, 1)
    assert backend.same_padding(1) == (0, 0)


def test_backward_matches_numeric(impl):
    rng = np.random.default_rng(11)
    x = rng.normal(size=(2, 3, 12))
    w = rng.normal(size=(4, 3, 5))
    b = rng.normal(size=4)
    proj = rng.normal(size=(2, 4, 12))  # fixed projection makes the loss scalar

    dy = proj.copy()
    dx, dw, db = impl.conv1d_backward(x, w, dy)

    def loss():
        return float((impl.conv1d_forward(x, w, b) * proj).sum())

    eps = 1e-6
    for arr, grad in ((x, dx), (w, dw), (b, db)):
        flat, gflat = arr.reshape(-1), grad.reshape(-1)
        for i in range(0, flat.size, 7):
            orig = flat[i]
            flat[i] = orig + eps
            up = loss()
            flat[i] = orig - eps
            down = loss()
            flat[i] = orig
            numeric = (up - down) / (2 * eps)
            assert abs(numeric - gflat[i]) < 1e-6 * max(1.0, abs(gflat[i]))


def test_backends_agree():
    names = backend.available_backends()
    if len(names) < 2:
        pytest.skip("only one backend built")
    rng = np.random.default_rng(13)
    x = rng.normal(size=(3, 18, 50))
    w = rng.normal(size=(10, 18, 10))
    b = rng.normal(size=10)
    dy = rng.normal(size=(3, 10, 50))
    ys = [backend.get_impl(n).conv1d_forward(x, w, b) for n in names]
    assert np.allclose(ys[0], ys[1], rtol=1e-12, atol=1e-12)
    grads0 = backend.get_impl(names[0]).conv1d_backward(x, w, dy)
    grads1 = backend.get_impl(names[1]).conv1d_backward(x, w, dy)
    for g0, g1 in zip(grads0, grads1):
        assert np.allclose(g0, g1, rtol=1e-12, atol=1e-12)


def test_layer_rejects_channel_mismatch():
    layer = Conv1d(18, 10, 10)
    with pytest.raises(ValueError, match="conv input"):
        layer.forward(np.zeros((2, 17, 50)))


def test_layer_rejects_non_finite():
    layer = Conv1d(2, 2, 3)
    x = np.zeros((1, 2, 8))
    x[0, 0, 3] = np.nan
    with pytest.raises(ValueError, match="non-finite"):
        layer.forward(x)
