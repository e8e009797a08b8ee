import numpy as np
import pytest

from opsalign.data import MultivariateSeries, WindowBank


def toy_series(seed, n, unit="u", shift=0.0, phase_block=40, noise_seed=None,
               noise_std=0.15):
    """A labeled series whose channels encode phase and wear trends.

    Channels mix a per-phase offset, a signal that tracks the declining
    RUL, Gaussian noise and a constant domain shift, so small models can
    actually learn from it. noise_seed lets two series share structure
    (same distribution) while differing in their noise realization.
    """
    rng = np.random.default_rng(seed)
    phases = ((np.arange(n) // phase_block) % 3).astype(np.int8)
    rul = np.linspace(1.0, 0.0, n)
    phase_code = rng.normal(0.0, 1.0, size=(18, 3))
    wear_code = rng.normal(0.0, 1.0, size=18)
    noise_rng = rng if noise_seed is None else np.random.default_rng(noise_seed)
    values = (
        phase_code[:, phases]
        + np.outer(wear_code, 1.0 - rul)
        + noise_rng.normal(0.0, noise_std, size=(18, n))
        + shift
    )
    cycles = 1 + np.arange(n) * 10 // n
    return MultivariateSeries(
        unit_id=unit,
        values=values,
        cycle_index=cycles,
        fault_onset_cycle=1,
        eol_cycle=11,
        phases=phases,
        rul_norm=rul,
    )


def toy_banks(n_source=600, n_target=600, seed=0, shift=1.0):
    """Small labeled source bank and unlabeled target bank."""
    src = toy_series(seed, n_source + 49, unit="s0")
    tgt = toy_series(seed + 1, n_target + 49, unit="t0", shift=shift)
    source = WindowBank.from_series([src], domain="source")
    target = WindowBank.from_series([tgt], domain="target")
    return source, target


@pytest.fixture
def small_banks():
    return toy_banks(n_source=600, n_target=600, seed=3)
