"""Run-to-failure unit generator: health trajectory plus sensor synthesis.

Health declines linearly until the fault onset cycle, then exponentially
until end of life. The 17 non-altitude channels are smooth functions of
normalized altitude, operation phase and accumulated damage, with
per-channel couplings drawn once from a dedicated seed, plus Gaussian
noise. All quantitative constants here are synthetic choices; defaults
are tuned so that a short-to-long transfer shows a clear domain gap.
"""

from dataclasses import dataclass, field

import numpy as np

from ..data.series import MultivariateSeries, N_CHANNELS
from .flights import FLIGHT_CLASSES, gen_flight

ALT_SCALE_FT = 40000.0


@dataclass(frozen=True)
class DegradationSpec:
    total_cycles_range: tuple = (8, 12)
    onset_fraction_range: tuple = (0.55, 0.75)
    initial_health_range: tuple = (0.95, 1.0)
    linear_slope: float = 0.004          # health lost per cycle before onset
    decay_rate: float = 0.30             # exponential rate per cycle after onset
    sensor_noise_std: float = 0.02
    altitude_noise_std_ft: float = 0.3
    coupling_seed: int = 7

    def __post_init__(self):
        lo, hi = self.onset_fraction_range
        if not (0.0 < lo <= hi < 1.0):
            raise ValueError("onset fraction range must lie strictly inside (0, 1)")
        if not (0.0 < self.initial_health_range[0] <= self.initial_health_range[1] <= 1.0):
            raise ValueError("initial health must lie in (0, 1]")


@dataclass(frozen=True)
class SensorCoupling:
    """Per-channel response coefficients, fixed for a coupling seed."""

    base: np.ndarray
    alt_gain: np.ndarray
    alt_curve: np.ndarray
    phase_offset: np.ndarray        # (17, 3)
    damage_gain: np.ndarray
    damage_phase_gain: np.ndarray   # (17, 3)
    damage_alt_gain: np.ndarray

    @classmethod
    def from_seed(cls, seed):
        rng = np.random.default_rng(seed)
        n = N_CHANNELS - 1
        return cls(
            base=rng.uniform(-0.4, 0.4, n),
            alt_gain=rng.uniform(0.6, 1.4, n),
            alt_curve=rng.uniform(-0.4, 0.4, n),
            phase_offset=rng.uniform(-0.7, 0.7, (n, 3)),
            damage_gain=rng.uniform(0.5, 1.2, n) * rng.choice([-1.0, 1.0], n),
            damage_phase_gain=rng.uniform(0.2, 1.0, (n, 3)),
            damage_alt_gain=rng.uniform(0.0, 0.8, n),
        )


def health_trajectory(spec, rng):
    """Per-cycle health: (healths indexed 1..total, onset cycle, eol cycle)."""
    total = int(rng.integers(spec.total_cycles_range[0], spec.total_cycles_range[1] + 1))
    frac = rng.uniform(*spec.onset_fraction_range)
    onset = min(max(int(round(frac * total)), 1), total - 1)
    h0 = rng.uniform(*spec.initial_health_range)
    cycles = np.arange(1, total + 1)
    health = h0 - spec.linear_slope * cycles.astype(np.float64)
    h_onset = h0 - spec.linear_slope * onset
    after = cycles > onset
    health[after] = h_onset * np.exp(-spec.decay_rate * (cycles[after] - onset))
    return health, onset, total


def synth_channels(alt, phase, damage, coupling, noise_std, rng):
    """Sensor matrix (17, n) for one flight at health deficit `damage`."""
    a = alt / ALT_SCALE_FT
    c = coupling
    base = c.base[:, None] + c.alt_gain[:, None] * a + c.alt_curve[:, None] * a * a
    base += c.phase_offset[:, phase]
    stress = c.damage_gain[:, None] * c.damage_phase_gain[:, phase]
    base += stress * damage * (1.0 + c.damage_alt_gain[:, None] * a)
    if noise_std > 0:
        base = base + rng.normal(0.0, noise_std, size=base.shape)
    return base


def gen_unit(class_name, seed, unit_index=0, degradation=None, class_spec=None):
    """One run-to-failure unit as a MultivariateSeries at 1 Hz.

    The attached phases are the generator's ground truth; the pipeline
    recomputes its own labels from altitude. fault_onset_cycle / eol_cycle
    mark where abnormal degradation starts and where health reaches the
    unit's end-of-life level.
    """
    degradation = degradation or DegradationSpec()
    class_spec = class_spec or FLIGHT_CLASSES[class_name]
    coupling = SensorCoupling.from_seed(degradation.coupling_seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, unit_index]))

    health, onset, total = health_trajectory(degradation, rng)
    values, phases, cycle_index = [], [], []
    for cycle in range(1, total + 1):
        alt, gt_phase = gen_flight(class_spec, rng, degradation.altitude_noise_std_ft)
        damage = 1.0 - health[cycle - 1]
        sensors = synth_channels(alt, gt_phase, damage, coupling,
                                 degradation.sensor_noise_std, rng)
        values.append(np.vstack([alt[None, :], sensors]))
        phases.append(gt_phase)
        cycle_index.append(np.full(alt.size, cycle, dtype=np.int64))

    return MultivariateSeries(
        unit_id=f"{class_name}_{seed}_{unit_index}",
        values=np.concatenate(values, axis=1),
        sample_rate_hz=1.0,
        cycle_index=np.concatenate(cycle_index),
        fault_onset_cycle=onset,
        eol_cycle=total,
        phases=np.concatenate(phases),
    )


def gen_fleet(class_name, n_units, seed, degradation=None, class_spec=None):
    """Independent units of one flight class; deterministic per (seed, index)."""
    if n_units < 1:
        raise ValueError("need at least one unit")
    return [
        gen_unit(class_name, seed, unit_index=i, degradation=degradation, class_spec=class_spec)
        for i in range(n_units)
    ]
