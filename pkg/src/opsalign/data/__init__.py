"""Ingestion, preprocessing, phase segmentation and windowing."""

from .io import SchemaError, load_csv, meta_path_for, write_csv
from .phases import attach_phases, label_phases
from .preprocess import apply_scaler, decimate, fit_scaler, normalize_rul, retain_post_onset
from .series import (
    ALT_CHANNEL,
    ASCENDING,
    CHANNELS,
    DESCENDING,
    N_CHANNELS,
    N_PHASES,
    PHASE_NAMES,
    STEADY,
    MultivariateSeries,
    ScalerParams,
)
from .windows import WINDOW_LEN, Window, WindowBank, make_windows, window_count

__all__ = [
    "SchemaError", "load_csv", "meta_path_for", "write_csv",
    "attach_phases", "label_phases",
    "apply_scaler", "decimate", "fit_scaler", "normalize_rul", "retain_post_onset",
    "ALT_CHANNEL", "ASCENDING", "CHANNELS", "DESCENDING", "N_CHANNELS",
    "N_PHASES", "PHASE_NAMES", "STEADY", "MultivariateSeries", "ScalerParams",
    "WINDOW_LEN", "Window", "WindowBank", "make_windows", "window_count",
]
