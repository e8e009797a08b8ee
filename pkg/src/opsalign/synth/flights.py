"""Synthetic multiphase altitude profiles per flight class.

Profiles are piecewise-linear at 1 Hz: an initial climb, alternating
cruise plateaus and mid-flight step climbs/descents, and a final descent
to ground, plus altitude sensor noise. Ground-truth phase labels come
from the generating segment, so the altitude-derivative labeler can be
scored against them.
"""

from dataclasses import dataclass

import numpy as np

from ..data.series import ASCENDING, DESCENDING, STEADY


@dataclass(frozen=True)
class FlightClassSpec:
    name: str
    duration_range_h: tuple       # flight length in hours
    cruise_alt_range_ft: tuple
    climb_rate_range: tuple       # ft/s, applied positive
    descent_rate_range: tuple     # ft/s, applied negative
    step_count_range: tuple = (0, 2)
    step_rate_range: tuple = (5.0, 12.0)

    def __post_init__(self):
        if self.climb_rate_range[0] <= 0.5 or self.step_rate_range[0] <= 0.5:
            raise ValueError("climb/step rates must exceed the 0.5 ft/s phase threshold")
        if self.duration_range_h[0] >= self.duration_range_h[1]:
            raise ValueError("duration range must be increasing")


FLIGHT_CLASSES = {
    "short": FlightClassSpec("short", (1.0, 3.0), (20000.0, 26000.0), (15.0, 25.0), (15.0, 25.0), (0, 2)),
    "medium": FlightClassSpec("medium", (3.0, 5.0), (26000.0, 32000.0), (15.0, 25.0), (15.0, 25.0), (1, 3)),
    "long": FlightClassSpec("long", (5.0, 7.0), (32000.0, 38000.0), (15.0, 25.0), (15.0, 25.0), (1, 4)),
}

_EDGE_MARGIN_S = 90.0  # keeps rounding from pushing flights out of the class range
_MIN_PLATEAU_S = 120.0


def gen_flight(spec, rng, altitude_noise_std=0.3):
    """One flight profile: (altitude ft at 1 Hz, ground-truth phase labels)."""
    lo, hi = (h * 3600.0 for h in spec.duration_range_h)
    duration = rng.uniform(lo + _EDGE_MARGIN_S, hi - _EDGE_MARGIN_S)
    cruise = rng.uniform(*spec.cruise_alt_range_ft)
    climb_rate = rng.uniform(*spec.climb_rate_range)
    descent_rate = rng.uniform(*spec.descent_rate_range)
    n_steps = int(rng.integers(spec.step_count_range[0], spec.step_count_range[1] + 1))

    # plan mid-flight altitude changes; each must move at least 500 ft
    levels = [cruise]
    for _ in range(n_steps):
        nxt = rng.uniform(*spec.cruise_alt_range_ft)
        if abs(nxt - levels[-1]) < 500.0:
            lo_a, hi_a = spec.cruise_alt_range_ft
            nxt = lo_a if levels[-1] > (lo_a + hi_a) / 2 else hi_a
        levels.append(nxt)
    step_rates = rng.uniform(*spec.step_rate_range, size=n_steps)

    t_climb = cruise / climb_rate
    t_desc = levels[-1] / descent_rate
    t_steps = sum(abs(levels[i + 1] - levels[i]) / step_rates[i] for i in range(n_steps))
    remaining = duration - t_climb - t_desc - t_steps
    if remaining < _MIN_PLATEAU_S * (n_steps + 1):
        n_steps, levels, t_steps = 0, [cruise], 0.0
        t_desc = cruise / descent_rate
        remaining = duration - t_climb - t_desc

    weights = rng.uniform(0.5, 1.5, size=n_steps + 1)
    plateau_times = remaining * weights / weights.sum()

    # per-second vertical rates, segment by segment
    rates, phases = [], []

    def push(n, rate, phase):
        n = max(int(round(n)), 1)
        rates.append(np.full(n, rate))
        phases.append(np.full(n, phase, dtype=np.int8))

    push(t_climb, climb_rate, ASCENDING)
    for i in range(n_steps):
        push(plateau_times[i], 0.0, STEADY)
        delta = levels[i + 1] - levels[i]
        push(abs(delta) / step_rates[i], np.sign(delta) * step_rates[i],
             ASCENDING if delta > 0 else DESCENDING)
    push(plateau_times[-1], 0.0, STEADY)
    push(t_desc, -descent_rate, DESCENDING)

    rate = np.concatenate(rates)
    phase = np.concatenate(phases)
    alt = np.cumsum(rate)
    alt -= min(alt.min(), 0.0)  # never below ground
    if altitude_noise_std > 0:
        alt = alt + rng.normal(0.0, altitude_noise_std, size=alt.size)
    return alt, phase
