"""Training-progress schedules for the reversal strength and learning rate.

Progress p is completed optimizer steps over total planned steps. The
reversal strength is refreshed every step; the learning rate only at epoch
boundaries.
"""

import numpy as np


def reversal_strength(p):
    """2/(1 + exp(-10 p)) - 1: ramps from 0 at p=0 towards 1 at p=1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"progress must lie in [0, 1], got {p}")
    return 2.0 / (1.0 + np.exp(-10.0 * p)) - 1.0


def annealed_lr(p, base_lr):
    """base_lr / (1 + 10 p)^0.75: strictly decreasing from base_lr."""
    if base_lr <= 0:
        raise ValueError("base learning rate must be positive")
    return base_lr / (1.0 + 10.0 * p) ** 0.75
