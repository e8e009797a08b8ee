"""Minimal fixed-architecture neural network engine."""

from .backend import BACKEND, available_backends
from .gradcheck import finite_difference_check
from .init import xavier_init
from .layers import (
    BatchNorm1d,
    Conv1d,
    Dense,
    Flatten,
    GradientReversal,
    Param,
    ReLU,
    Sequential,
    Sigmoid,
    Softmax,
)
from .losses import bce_loss, ce_loss, compute_loss, mae_loss, rmse_loss
from .optim import MomentumSGD
from .schedules import annealed_lr, reversal_strength
from .serialize import load_arrays, save_arrays

__all__ = [
    "BACKEND",
    "available_backends",
    "finite_difference_check",
    "xavier_init",
    "BatchNorm1d",
    "Conv1d",
    "Dense",
    "Flatten",
    "GradientReversal",
    "Param",
    "ReLU",
    "Sequential",
    "Sigmoid",
    "Softmax",
    "bce_loss",
    "ce_loss",
    "compute_loss",
    "mae_loss",
    "rmse_loss",
    "MomentumSGD",
    "annealed_lr",
    "reversal_strength",
    "load_arrays",
    "save_arrays",
]
