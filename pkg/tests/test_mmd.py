import numpy as np
import pytest

from opsalign.methods import MmdConfig, compute_mk_mmd, mk_mmd_with_grad


def test_identical_batches_give_zero():
    rng = np.random.default_rng(0)
    f = rng.normal(size=(32, 50))
    assert abs(compute_mk_mmd(f, f.copy())) <= 1e-9


def test_two_point_hand_expansion():
    a = np.array([[0.3, -0.2, 1.0]])
    b = np.array([[-0.5, 0.4, 0.2]])
    gamma = 0.7
    got = compute_mk_mmd(a, b, MmdConfig(bandwidths=(gamma,)))
    expect = 2.0 - 2.0 * np.exp(-gamma * np.sum((a - b) ** 2))
    assert got == pytest.approx(expect, abs=1e-12)


def test_default_bandwidths_match_config():
    assert MmdConfig().bandwidths == (0.01, 0.1, 1.0, 10.0, 100.0)


def test_non_negative_up_to_rounding():
    rng = np.random.default_rng(1)
    for trial in range(20):
        s = rng.normal(size=(rng.integers(2, 20), 8))
        t = rng.normal(loc=rng.normal(), size=(rng.integers(2, 20), 8))
        assert compute_mk_mmd(s, t) >= -1e-9


def test_symmetry():
    rng = np.random.default_rng(2)
    s = rng.normal(size=(12, 6))
    t = rng.normal(loc=0.5, size=(9, 6))
    assert compute_mk_mmd(s, t) == pytest.approx(compute_mk_mmd(t, s), abs=1e-12)


def test_grows_with_separation():
    rng = np.random.default_rng(3)
    s = rng.normal(size=(40, 5))
    near = compute_mk_mmd(s, rng.normal(loc=0.1, size=(40, 5)))
    far = compute_mk_mmd(s, rng.normal(loc=3.0, size=(40, 5)))
    assert far > near


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="dimension mismatch"):
        compute_mk_mmd(np.zeros((3, 4)), np.zeros((3, 5)))
    with pytest.raises(ValueError, match="non-empty"):
        compute_mk_mmd(np.zeros((0, 4)), np.zeros((3, 4)))


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(4)
    s = rng.normal(size=(6, 4))
    t = rng.normal(loc=0.8, size=(5, 4))
    cfg = MmdConfig()
    _, gs, gt = mk_mmd_with_grad(s, t, cfg)
    eps = 1e-6
    for arr, grad in ((s, gs), (t, gt)):
        flat, gflat = arr.reshape(-1), grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            up = compute_mk_mmd(s, t, cfg)
            flat[i] = orig - eps
            down = compute_mk_mmd(s, t, cfg)
            flat[i] = orig
            numeric = (up - down) / (2 * eps)
            assert abs(numeric - gflat[i]) < 1e-6 * max(1.0, abs(gflat[i]))
