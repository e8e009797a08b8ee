"""Gradient descent with classical momentum."""

import numpy as np


class MomentumSGD:
    """v <- momentum * v + g; theta <- theta - lr * v.

    lr is a plain attribute so schedules can rewrite it between epochs.
    """

    def __init__(self, params, lr, momentum=0.0):
        if lr <= 0:
            raise ValueError("learning rate must be positive")
        if not 0.0 <= momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        self.params = list(params)
        self.lr = lr
        self.momentum = momentum
        self.velocity = [np.zeros_like(p.value) for p in self.params]

    def step(self):
        for p, v in zip(self.params, self.velocity):
            if not np.isfinite(p.grad).all():
                raise ValueError(f"non-finite gradient in parameter {p.name or p.shape}")
            v *= self.momentum
            v += p.grad
            p.value -= self.lr * v

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()
