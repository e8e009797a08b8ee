"""Model assembly and the seven training procedures."""

from .mmd import MmdConfig, compute_mk_mmd, mk_mmd_with_grad
from .models import METHODS, ModelBundle, build_model
from .training import (
    TrainConfig,
    TrainResult,
    adapt_batchnorm_statistics,
    default_epochs,
    extract_features,
    predict_rul,
    step_losses,
    train,
    train_adabn,
    train_dann,
    train_mkmmd,
    train_multiclass_ops_dann,
    train_ops_dann_hard,
    train_ops_dann_soft,
    train_source_only,
)

__all__ = [
    "MmdConfig", "compute_mk_mmd", "mk_mmd_with_grad",
    "METHODS", "ModelBundle", "build_model",
    "TrainConfig", "TrainResult", "adapt_batchnorm_statistics", "default_epochs",
    "extract_features", "predict_rul", "step_losses", "train",
    "train_adabn", "train_dann", "train_mkmmd", "train_multiclass_ops_dann",
    "train_ops_dann_hard", "train_ops_dann_soft", "train_source_only",
]
