"""Core data types for unit recordings and training windows."""

from dataclasses import dataclass, field, replace

import numpy as np

# channel order of the ingestion schema: 4 flight-condition descriptors
# followed by 14 engine measurements; altitude is channel 0
CHANNELS = [
    "alt", "mach", "tra", "t2",
    "t24", "t30", "t48", "t50",
    "p15", "p2", "p21", "p24", "ps30", "p40", "p50",
    "nf", "nc", "wf",
]
N_CHANNELS = len(CHANNELS)
ALT_CHANNEL = 0

# discrete operation-profile phases, segmented from the altitude derivative
ASCENDING = 0
STEADY = 1
DESCENDING = 2
N_PHASES = 3
PHASE_NAMES = {ASCENDING: "ascending", STEADY: "steady", DESCENDING: "descending"}


@dataclass
class MultivariateSeries:
    """One unit's recording: channels x time, with per-timestep cycle numbers.

    fault_onset_cycle/eol_cycle may stay None until metadata is attached;
    operations that need them check explicitly. phases and rul_norm are
    filled in by the pipeline.
    """

    unit_id: str
    values: np.ndarray          # (n_channels, n_timesteps)
    sample_rate_hz: float = 1.0
    altitude_channel: int = ALT_CHANNEL
    cycle_index: np.ndarray = None
    fault_onset_cycle: int = None
    eol_cycle: int = None
    phases: np.ndarray = None
    rul_norm: np.ndarray = None
    channel_names: list = field(default_factory=lambda: list(CHANNELS))

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError(f"unit {self.unit_id}: values must be 2-d, got {self.values.shape}")
        if self.sample_rate_hz <= 0:
            raise ValueError(f"unit {self.unit_id}: sample rate must be positive")
        if not 0 <= self.altitude_channel < self.values.shape[0]:
            raise ValueError(f"unit {self.unit_id}: altitude channel out of range")
        if self.cycle_index is None:
            self.cycle_index = np.zeros(self.values.shape[1], dtype=np.int64)
        self.cycle_index = np.asarray(self.cycle_index, dtype=np.int64)
        if self.cycle_index.shape != (self.values.shape[1],):
            raise ValueError(f"unit {self.unit_id}: cycle_index length mismatch")
        if np.any(np.diff(self.cycle_index) < 0):
            raise ValueError(f"unit {self.unit_id}: cycle_index must be non-decreasing")
        if self.fault_onset_cycle is not None and self.eol_cycle is not None:
            if self.eol_cycle <= self.fault_onset_cycle:
                raise ValueError(
                    f"unit {self.unit_id}: end of life ({self.eol_cycle}) must come "
                    f"after fault onset ({self.fault_onset_cycle})"
                )

    @property
    def n_channels(self):
        return self.values.shape[0]

    @property
    def n_timesteps(self):
        return self.values.shape[1]

    @property
    def altitude(self):
        return self.values[self.altitude_channel]

    def sliced(self, mask_or_index):
        """Copy of this series restricted to the selected timesteps."""
        return replace(
            self,
            values=self.values[:, mask_or_index].copy(),
            cycle_index=self.cycle_index[mask_or_index].copy(),
            phases=None if self.phases is None else self.phases[mask_or_index].copy(),
            rul_norm=None if self.rul_norm is None else self.rul_norm[mask_or_index].copy(),
        )


@dataclass(frozen=True)
class ScalerParams:
    """Per-channel min/max fitted on one domain (the labeled one)."""

    minima: np.ndarray
    maxima: np.ndarray
    fitted_domain: str = "source"

    def __post_init__(self):
        object.__setattr__(self, "minima", np.asarray(self.minima, dtype=np.float64))
        object.__setattr__(self, "maxima", np.asarray(self.maxima, dtype=np.float64))
        if np.any(self.maxima < self.minima):
            raise ValueError("per-channel max must be >= min")
