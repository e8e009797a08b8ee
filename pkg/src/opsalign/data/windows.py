"""Sliding-window extraction and the batched window store used in training."""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..nn.serialize import load_arrays, save_arrays
from .series import MultivariateSeries

WINDOW_LEN = 50


@dataclass
class Window:
    """One p x T training sample labelled at its last timestep."""

    data: np.ndarray
    domain: str
    phase: int
    rul_norm: float  # None for unlabeled (target) windows
    unit_id: str
    cycle: int


def window_count(n_timesteps, length=WINDOW_LEN, stride=1):
    if n_timesteps < length:
        raise ValueError(f"series of length {n_timesteps} shorter than window length {length}")
    return (n_timesteps - length) // stride + 1


def make_windows(series, length=WINDOW_LEN, stride=1, domain="source"):
    """All windows of one series; phase/RUL/cycle taken at the last timestep."""
    n = window_count(series.n_timesteps, length, stride)
    labeled = domain == "source" and series.rul_norm is not None
    out = []
    for i in range(n):
        start = i * stride
        last = start + length - 1
        out.append(Window(
            data=series.values[:, start:start + length].copy(),
            domain=domain,
            phase=int(series.phases[last]) if series.phases is not None else None,
            rul_norm=float(series.rul_norm[last]) if labeled else None,
            unit_id=series.unit_id,
            cycle=int(series.cycle_index[last]),
        ))
    return out


class WindowBank:
    """Windows over several units, stored as series plus start indices.

    Windows of one unit may cross cycle boundaries (the count follows the
    closed-form (N - T) // stride + 1 per unit) but never unit boundaries.
    Target-domain banks never carry RUL labels; evaluation reattaches them
    through a separate labeled bank.
    """

    def __init__(self, values, starts, phase, cycle, unit_idx, unit_ids,
                 spans, domain, rul=None, length=WINDOW_LEN):
        self.values = values              # (channels, total_timesteps)
        self.starts = starts              # (n_windows,) global start index
        self.phase = phase                # (n_windows,)
        self.cycle = cycle                # (n_windows,)
        self.unit_idx = unit_idx          # (n_windows,) index into unit_ids
        self.unit_ids = list(unit_ids)
        self.spans = spans                # per-unit (eol - onset) in cycles
        self.domain = domain
        self.length = length
        if domain == "target" and rul is not None:
            raise ValueError("target window banks must not carry RUL labels")
        self.rul = rul                    # (n_windows,) or None
        self._view = sliding_window_view(values, length, axis=1).transpose(1, 0, 2)

    @classmethod
    def from_series(cls, series_list, domain, length=WINDOW_LEN, stride=1,
                    with_labels=None):
        if with_labels is None:
            with_labels = domain == "source"
        chunks, starts, phase, cycle, unit_idx, spans, rul = [], [], [], [], [], [], []
        offset = 0
        for u, series in enumerate(series_list):
            n = window_count(series.n_timesteps, length, stride)
            if series.phases is None:
                raise ValueError(f"unit {series.unit_id}: phases must be labeled before windowing")
            local = np.arange(n) * stride
            last = local + length - 1
            chunks.append(series.values)
            starts.append(local + offset)
            phase.append(series.phases[last])
            cycle.append(series.cycle_index[last])
            unit_idx.append(np.full(n, u, dtype=np.int64))
            span = None
            if series.fault_onset_cycle is not None and series.eol_cycle is not None:
                span = series.eol_cycle - series.fault_onset_cycle
            spans.append(span)
            if with_labels:
                if series.rul_norm is None:
                    raise ValueError(f"unit {series.unit_id}: RUL labels requested but absent")
                rul.append(series.rul_norm[last])
            offset += series.n_timesteps
        return cls(
            values=np.ascontiguousarray(np.concatenate(chunks, axis=1)),
            starts=np.concatenate(starts),
            phase=np.concatenate(phase).astype(np.int8),
            cycle=np.concatenate(cycle).astype(np.int64),
            unit_idx=np.concatenate(unit_idx),
            unit_ids=[s.unit_id for s in series_list],
            spans=spans,
            domain=domain,
            rul=np.concatenate(rul) if with_labels else None,
            length=length,
        )

    def __len__(self):
        return self.starts.size

    def gather(self, idx):
        """Materialize the selected windows as a (B, channels, T) batch."""
        return np.ascontiguousarray(self._view[self.starts[idx]])

    def window_spans(self, idx=None):
        """Per-window (eol - onset) cycle span, for de-normalizing RUL."""
        sel = self.unit_idx if idx is None else self.unit_idx[idx]
        spans = np.array([s if s is not None else np.nan for s in self.spans], dtype=np.float64)
        return spans[sel]

    def save(self, path):
        entries = [
            ("bank/values", self.values),
            ("bank/starts", self.starts.astype(np.float64)),
            ("bank/phase", self.phase.astype(np.float64)),
            ("bank/cycle", self.cycle.astype(np.float64)),
            ("bank/unit_idx", self.unit_idx.astype(np.float64)),
            ("bank/spans", np.array([np.nan if s is None else s for s in self.spans], dtype=np.float64)),
            ("bank/length", np.array(float(self.length))),
            ("bank/labeled", np.array(1.0 if self.rul is not None else 0.0)),
        ]
        if self.rul is not None:
            entries.append(("bank/rul", self.rul))
        for i, uid in enumerate(self.unit_ids):
            entries.append((f"bank/unit_id/{i}/{uid}", np.zeros(0)))
        entries.append(("bank/domain/" + self.domain, np.zeros(0)))
        save_arrays(path, entries)

    @classmethod
    def load(cls, path):
        data = load_arrays(path)
        unit_ids, domain = [], None
        for name in data:
            if name.startswith("bank/unit_id/"):
                _, _, idx, uid = name.split("/", 3)
                unit_ids.append((int(idx), uid))
            elif name.startswith("bank/domain/"):
                domain = name.split("/", 2)[2]
        unit_ids = [uid for _, uid in sorted(unit_ids)]
        spans = [None if np.isnan(s) else int(s) for s in data["bank/spans"]]
        return cls(
            values=data["bank/values"],
            starts=data["bank/starts"].astype(np.int64),
            phase=data["bank/phase"].astype(np.int8),
            cycle=data["bank/cycle"].astype(np.int64),
            unit_idx=data["bank/unit_idx"].astype(np.int64),
            unit_ids=unit_ids,
            spans=spans,
            domain=domain,
            rul=data.get("bank/rul"),
            length=int(data["bank/length"]),
        )
