"""Operation-profile phase segmentation from the altitude signal."""

import numpy as np
from scipy import ndimage

from .series import ASCENDING, DESCENDING, STEADY


def label_phases(series, threshold=0.5, median_len=51):
    """Label every timestep ascending / steady / descending.

    The forward difference of altitude (ft) per second is thresholded at
    +/- `threshold` (inclusive: a climb of exactly +threshold counts as
    ascending); the final sample repeats its predecessor's label. An
    odd-length median filter with edge replication then removes
    noise-induced flips. Intended for the original (pre-decimation)
    sample rate, where the default threshold and filter length apply.
    """
    if median_len % 2 == 0:
        raise ValueError("median filter length must be odd")
    alt = series.altitude
    if alt.size < 2:
        raise ValueError(f"unit {series.unit_id}: need at least 2 samples to label phases")
    dt = 1.0 / series.sample_rate_hz
    rate = np.diff(alt) / dt
    labels = np.full(alt.size, STEADY, dtype=np.int8)
    labels[:-1][rate >= threshold] = ASCENDING
    labels[:-1][rate <= -threshold] = DESCENDING
    labels[-1] = labels[-2]
    if median_len > 1:
        labels = ndimage.median_filter(labels, size=median_len, mode="nearest")
    return labels.astype(np.int8)


def attach_phases(series, threshold=0.5, median_len=51):
    """Return the series with computed phase labels attached."""
    from dataclasses import replace
    return replace(series, phases=label_phases(series, threshold, median_len))
