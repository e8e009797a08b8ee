"""Decimation, scaling and RUL normalization."""

from dataclasses import replace

import numpy as np
from scipy import signal

from .series import MultivariateSeries, ScalerParams


def decimate(series, factor=10, order=8):
    """Low-pass filter and subsample every channel by `factor`.

    Anti-aliasing uses a zero-phase (forward-backward) Chebyshev type-I
    filter of the given order with 0.05 dB passband ripple and cutoff at
    0.8x the post-decimation Nyquist, normalized to unit gain at DC (an
    even-order type-I filter otherwise sits at the ripple floor there, and
    constant channels must survive decimation unchanged). Per-timestep
    annotations (cycle, phases, rul) are carried over by keeping every
    factor-th entry.
    """
    if factor < 1 or int(factor) != factor:
        raise ValueError("decimation factor must be a positive integer")
    if series.n_timesteps <= order * factor:
        raise ValueError(
            f"unit {series.unit_id}: series of length {series.n_timesteps} too short "
            f"to decimate (need > {order * factor} samples)"
        )
    sos = signal.cheby1(order, 0.05, 0.8 / factor, output="sos")
    dc_gain = np.prod([sec[:3].sum() / sec[3:].sum() for sec in sos])
    sos[0, :3] /= dc_gain
    filtered = signal.sosfiltfilt(sos, series.values, axis=1)
    keep = slice(None, None, factor)
    return replace(
        series,
        values=np.ascontiguousarray(filtered[:, keep]),
        sample_rate_hz=series.sample_rate_hz / factor,
        cycle_index=series.cycle_index[keep].copy(),
        phases=None if series.phases is None else series.phases[keep].copy(),
        rul_norm=None if series.rul_norm is None else series.rul_norm[keep].copy(),
    )


def fit_scaler(series_list, domain="source"):
    """Per-channel min/max over every timestep of the given (source) units."""
    if not series_list:
        raise ValueError("cannot fit a scaler on an empty series set")
    minima = np.min([s.values.min(axis=1) for s in series_list], axis=0)
    maxima = np.max([s.values.max(axis=1) for s in series_list], axis=0)
    return ScalerParams(minima=minima, maxima=maxima, fitted_domain=domain)


def apply_scaler(series, scaler):
    """Map each channel to [-1, 1] by the fitted range; no clipping.

    Values outside the fitted range (target domain) land outside [-1, 1].
    A degenerate constant channel (max == min) maps to 0 everywhere.
    """
    span = scaler.maxima - scaler.minima
    safe = np.where(span == 0.0, 1.0, span)
    scaled = 2.0 * (series.values - scaler.minima[:, None]) / safe[:, None] - 1.0
    scaled[span == 0.0, :] = 0.0
    return replace(series, values=scaled)


def normalize_rul(series, mode="onset_anchored"):
    """Per-timestep normalized RUL from the cycle counter.

    onset_anchored: (eol - cycle) / (eol - onset), i.e. 1.0 at the fault
    onset cycle falling linearly to 0.0 at end of life. max_cycles divides
    remaining cycles by the unit's end-of-life cycle count instead.
    """
    if series.fault_onset_cycle is None or series.eol_cycle is None:
        raise ValueError(f"unit {series.unit_id}: fault onset / end-of-life cycles unknown")
    onset, eol = series.fault_onset_cycle, series.eol_cycle
    if eol <= onset:
        raise ValueError(f"unit {series.unit_id}: end of life must come after onset")
    remaining = (eol - series.cycle_index).astype(np.float64)
    if mode == "onset_anchored":
        rul = remaining / (eol - onset)
    elif mode == "max_cycles":
        rul = remaining / eol
    else:
        raise ValueError(f"unknown rul normalization mode {mode!r}")
    return replace(series, rul_norm=rul)


def retain_post_onset(series):
    """Keep only timesteps from the fault onset cycle onward."""
    if series.fault_onset_cycle is None:
        raise ValueError(f"unit {series.unit_id}: fault onset cycle unknown")
    mask = series.cycle_index >= series.fault_onset_cycle
    if not mask.any():
        raise ValueError(f"unit {series.unit_id}: no samples at or after fault onset")
    return series.sliced(mask)
