import numpy as np
import pytest

from opsalign.data import (
    ASCENDING,
    DESCENDING,
    STEADY,
    attach_phases,
    decimate,
    fit_scaler,
    apply_scaler,
    label_phases,
    normalize_rul,
    retain_post_onset,
    WindowBank,
)
from opsalign.synth import (
    FLIGHT_CLASSES,
    DegradationSpec,
    gen_fleet,
    gen_flight,
    gen_unit,
    health_trajectory,
)


class TestFlightProfiles:
    def test_starts_ascending_ends_descending(self):
        for seed in range(5):
            _, phase = gen_flight(FLIGHT_CLASSES["short"], np.random.default_rng(seed))
            assert phase[0] == ASCENDING
            assert phase[-1] == DESCENDING

    def test_short_class_duration_range(self):
        for seed in range(10):
            alt, _ = gen_flight(FLIGHT_CLASSES["short"], np.random.default_rng(seed))
            assert 3600 <= alt.size <= 10800

    def test_long_class_duration_range(self):
        for seed in range(5):
            alt, _ = gen_flight(FLIGHT_CLASSES["long"], np.random.default_rng(seed))
            assert 5 * 3600 <= alt.size <= 7 * 3600

    def test_same_seed_identical(self):
        a1, p1 = gen_flight(FLIGHT_CLASSES["medium"], np.random.default_rng(42))
        a2, p2 = gen_flight(FLIGHT_CLASSES["medium"], np.random.default_rng(42))
        assert np.array_equal(a1, a2)
        assert np.array_equal(p1, p2)

    def test_altitude_stays_above_ground(self):
        alt, _ = gen_flight(FLIGHT_CLASSES["long"], np.random.default_rng(3))
        assert alt.min() > -5.0  # noise only


class TestHealthTrajectory:
    def test_linear_until_onset(self):
        spec = DegradationSpec()
        health, onset, total = health_trajectory(spec, np.random.default_rng(0))
        # exact linear extrapolation at the onset cycle
        h0 = health[0] + spec.linear_slope * 1
        assert health[onset - 1] == pytest.approx(h0 - spec.linear_slope * onset, abs=1e-12)

    def test_strictly_decreasing_after_onset(self):
        health, onset, total = health_trajectory(DegradationSpec(), np.random.default_rng(1))
        after = health[onset - 1:]
        assert np.all(np.diff(after) < 0)

    def test_onset_strictly_inside_lifetime(self):
        for seed in range(20):
            _, onset, total = health_trajectory(DegradationSpec(), np.random.default_rng(seed))
            assert 1 <= onset < total


class TestUnits:
    def test_unit_carries_onset_and_eol(self):
        unit = gen_unit("short", seed=0)
        assert unit.fault_onset_cycle < unit.eol_cycle
        assert unit.values.shape[0] == 18
        assert unit.phases is not None

    def test_labeler_recovers_ground_truth(self):
        # criterion: >= 99% agreement on interior timesteps of each flight
        spec = DegradationSpec(total_cycles_range=(3, 3))
        unit = gen_unit("short", seed=1, degradation=spec)
        computed = label_phases(unit)
        margin = 25  # half the median filter length
        agree = total = 0
        for cycle in np.unique(unit.cycle_index):
            mask = np.flatnonzero(unit.cycle_index == cycle)
            interior = mask[margin:-margin]
            agree += (computed[interior] == unit.phases[interior]).sum()
            total += interior.size
        assert agree / total >= 0.99

    def test_deterministic_per_seed(self):
        u1 = gen_unit("short", seed=5, unit_index=2)
        u2 = gen_unit("short", seed=5, unit_index=2)
        assert np.array_equal(u1.values, u2.values)

    def test_disjoint_seeds_differ(self):
        u1 = gen_unit("short", seed=0)
        u2 = gen_unit("short", seed=1)
        assert u1.n_timesteps != u2.n_timesteps or not np.array_equal(u1.values, u2.values)


class TestFleets:
    def test_long_steadier_than_short(self):
        short = gen_fleet("short", 3, seed=0)
        long_ = gen_fleet("long", 3, seed=0)
        frac = lambda units: np.mean([np.mean(u.phases == STEADY) for u in units])
        assert frac(long_) > frac(short)

    def test_long_units_have_more_samples(self):
        short = gen_fleet("short", 3, seed=1)
        long_ = gen_fleet("long", 3, seed=1)
        assert np.mean([u.n_timesteps for u in long_]) > np.mean([u.n_timesteps for u in short])

    def test_fleet_size_and_distinct_units(self):
        fleet = gen_fleet("medium", 5, seed=2)
        assert len(fleet) == 5
        sizes = {u.n_timesteps for u in fleet}
        assert len(sizes) > 1  # independent draws

    def test_generator_output_passes_pipeline(self):
        spec = DegradationSpec(total_cycles_range=(3, 4))
        fleet = gen_fleet("short", 2, seed=3, degradation=spec)
        labeled = [attach_phases(u) for u in fleet]
        dec = [decimate(u) for u in labeled]
        scaler = fit_scaler(dec)
        processed = [retain_post_onset(normalize_rul(apply_scaler(u, scaler))) for u in dec]
        bank = WindowBank.from_series(processed, domain="source")
        assert len(bank) > 100
        batch = bank.gather(np.arange(8))
        assert batch.shape == (8, 18, 50)
        assert np.isfinite(batch).all()
        assert bank.rul.min() >= 0.0 and bank.rul.max() <= 1.0
