import numpy as np
import pytest

from opsalign.nn import MomentumSGD, annealed_lr, reversal_strength, xavier_init
from opsalign.nn.layers import Conv1d, Dense, Param, Sequential

# frozen from a 40-digit mpmath evaluation of the closed forms
REVERSAL_AT_ONE = 0.9999092042625951
LR_AT_ONE_001 = 0.0016556002607617017


class TestXavierInit:
    def test_same_seed_is_bit_identical(self):
        nets = []
        for _ in range(2):
            net = Sequential(Conv1d(18, 10, 10), Dense(50, 50))
            xavier_init(net, np.random.default_rng(42))
            nets.append(net)
        for p0, p1 in zip(nets[0].params(), nets[1].params()):
            assert np.array_equal(p0.value, p1.value)

    def test_dense_variance_near_two_over_fan_sum(self):
        samples = []
        for seed in range(10):
            layer = Dense(50, 50)
            xavier_init(Sequential(layer), np.random.default_rng(seed))
            samples.append(layer.weight.value.reshape(-1))
        var = np.concatenate(samples).var()
        assert 0.8 * 0.02 <= var <= 1.2 * 0.02

    def test_biases_are_zero(self):
        net = Sequential(Conv1d(3, 4, 5), Dense(10, 2))
        xavier_init(net, np.random.default_rng(0))
        assert np.array_equal(net.layers[0].bias.value, np.zeros(4))
        assert np.array_equal(net.layers[1].bias.value, np.zeros(2))


class TestMomentumSGD:
    def test_plain_step(self):
        p = Param(np.array([0.0]))
        opt = MomentumSGD([p], lr=0.1, momentum=0.0)
        p.grad[...] = 1.0
        opt.step()
        assert p.value[0] == pytest.approx(-0.1, abs=1e-15)

    def test_zero_gradient_leaves_params(self):
        p = Param(np.array([1.5, -2.0]))
        opt = MomentumSGD([p], lr=0.5, momentum=0.9)
        opt.step()
        assert np.array_equal(p.value, [1.5, -2.0])

    def test_two_steps_match_hand_unrolled_recurrence(self):
        p = Param(np.array([1.0]))
        opt = MomentumSGD([p], lr=0.1, momentum=0.9)
        g1, g2 = 2.0, -1.0
        # hand recurrence: v1 = g1; th1 = th0 - lr*v1; v2 = 0.9*v1 + g2; th2 = th1 - lr*v2
        v1 = g1
        th1 = 1.0 - 0.1 * v1
        v2 = 0.9 * v1 + g2
        th2 = th1 - 0.1 * v2
        p.grad[...] = g1
        opt.step()
        opt.zero_grad()
        p.grad[...] = g2
        opt.step()
        assert p.value[0] == pytest.approx(th2, abs=1e-15)

    def test_non_finite_gradient_rejected(self):
        p = Param(np.array([0.0]))
        opt = MomentumSGD([p], lr=0.1)
        p.grad[...] = np.inf
        with pytest.raises(ValueError, match="non-finite"):
            opt.step()


class TestSchedules:
    def test_reversal_endpoints(self):
        assert reversal_strength(0.0) == 0.0
        assert reversal_strength(1.0) == pytest.approx(REVERSAL_AT_ONE, abs=1e-9)

    def test_reversal_monotone_on_grid(self):
        grid = np.linspace(0.0, 1.0, 1000)
        values = np.array([reversal_strength(p) for p in grid])
        assert np.all(np.diff(values) >= 0.0)
        assert np.all((values >= 0.0) & (values < 1.0))

    def test_reversal_domain(self):
        with pytest.raises(ValueError):
            reversal_strength(-0.01)
        with pytest.raises(ValueError):
            reversal_strength(1.01)

    def test_lr_start_and_end(self):
        assert annealed_lr(0.0, 0.037) == 0.037
        assert annealed_lr(1.0, 0.01) == pytest.approx(LR_AT_ONE_001, rel=1e-12)

    def test_lr_strictly_decreasing(self):
        grid = np.linspace(0.0, 1.0, 500)
        values = np.array([annealed_lr(p, 0.01) for p in grid])
        assert np.all(np.diff(values) < 0.0)

    def test_lr_requires_positive_base(self):
        with pytest.raises(ValueError):
            annealed_lr(0.5, 0.0)
