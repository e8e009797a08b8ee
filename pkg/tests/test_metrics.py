import numpy as np
import pytest

from opsalign.metrics import (
    ProbeConfig,
    nasa_score,
    pad_from_error,
    pca_project,
    proxy_a_distance,
    rmse,
    silhouette,
)


class TestRmse:
    def test_zero_on_perfect(self):
        assert rmse([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_unit_error(self):
        assert rmse([1.0, 1.0], [0.0, 0.0]) == pytest.approx(1.0)

    def test_matches_brute_force_recomputation(self):
        rng = np.random.default_rng(0)
        pred = rng.normal(size=1000)
        true = rng.normal(size=1000)
        brute = np.sqrt(sum((p - t) ** 2 for p, t in zip(pred, true)) / 1000)
        assert rmse(pred, true) == pytest.approx(brute, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rmse([], [])


class TestNasaScore:
    def test_perfect_single_prediction_scores_one(self):
        total, mean = nasa_score([42.0], [42.0])
        assert total == 1.0
        assert mean == 1.0

    def test_ten_cycle_overestimate_contributes_e(self):
        total, _ = nasa_score([20.0], [10.0])
        assert total == pytest.approx(np.e, abs=1e-12)

    def test_overestimation_dominates(self):
        for c in (1.0, 5.0, 20.0):
            over, _ = nasa_score([c], [0.0])
            under, _ = nasa_score([0.0], [c])
            assert over > under

    def test_mean_at_least_one(self):
        rng = np.random.default_rng(1)
        _, mean = nasa_score(rng.normal(size=50), rng.normal(size=50))
        assert mean >= 1.0


class TestProxyADistance:
    def test_formula_points(self):
        assert pad_from_error(0.25) == 1.0
        assert pad_from_error(0.5) == 0.0
        assert pad_from_error(0.0) == 2.0
        assert pad_from_error(0.9) == 0.0  # clamped

    def test_separated_blobs_near_two(self):
        rng = np.random.default_rng(2)
        s = rng.normal(loc=-3.0, scale=0.5, size=(300, 50))
        t = rng.normal(loc=+3.0, scale=0.5, size=(300, 50))
        assert proxy_a_distance(s, t, ProbeConfig(seeds=(0, 1, 2))) > 1.8

    def test_identical_distributions_near_zero(self):
        rng = np.random.default_rng(3)
        s = rng.normal(size=(300, 50))
        t = rng.normal(size=(300, 50))
        assert proxy_a_distance(s, t, ProbeConfig(seeds=(0, 1, 2))) < 0.2

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValueError, match="at least 10"):
            proxy_a_distance(np.zeros((5, 8)), np.zeros((50, 8)))


class TestPca:
    def test_axis_aligned_recovery(self):
        rng = np.random.default_rng(4)
        x = np.zeros((500, 2))
        x[:, 0] = rng.normal(scale=3.0, size=500)
        x[:, 1] = rng.normal(scale=1.0, size=500)
        _, explained, components = pca_project(x, k=2)
        assert abs(abs(components[0, 0]) - 1.0) < 1e-2
        assert abs(abs(components[1, 1]) - 1.0) < 1e-2
        assert explained[0] >= explained[1]

    def test_components_orthonormal(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(200, 10)) @ rng.normal(size=(10, 10))
        _, _, comp = pca_project(x, k=2)
        gram = comp @ comp.T
        assert np.abs(gram - np.eye(2)).max() < 1e-9

    def test_rank_two_reconstruction(self):
        rng = np.random.default_rng(6)
        basis = rng.normal(size=(2, 20))
        coeffs = rng.normal(size=(300, 2))
        x = coeffs @ basis
        coords, explained, comp = pca_project(x, k=2)
        recon = coords @ comp + x.mean(axis=0)
        assert np.abs(recon - x).max() < 1e-8
        assert explained.sum() == pytest.approx(1.0, abs=1e-9)

    def test_translation_invariant(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(100, 5))
        c1, _, _ = pca_project(x, k=2)
        c2, _, _ = pca_project(x + 100.0, k=2)
        assert np.allclose(c1, c2, atol=1e-8)

    def test_rank_deficient_padded_with_zeros(self):
        x = np.zeros((50, 4))
        x[:, 0] = np.arange(50.0)
        coords, explained, comp = pca_project(x, k=2)
        assert np.array_equal(comp[1], np.zeros(4))
        assert explained[1] == 0.0
        assert np.array_equal(coords[:, 1], np.zeros(50))


class TestSilhouette:
    def test_separated_clusters_score_high(self):
        rng = np.random.default_rng(8)
        a = rng.normal(loc=0.0, scale=0.2, size=(100, 2))
        b = rng.normal(loc=5.0, scale=0.2, size=(100, 2))
        points = np.concatenate([a, b])
        labels = np.array([0] * 100 + [1] * 100)
        assert silhouette(points, labels) > 0.8

    def test_mixed_clusters_score_low(self):
        rng = np.random.default_rng(9)
        points = rng.normal(size=(200, 2))
        labels = rng.integers(0, 2, size=200)
        assert abs(silhouette(points, labels)) < 0.1

    def test_single_label_rejected(self):
        with pytest.raises(ValueError, match="two labels"):
            silhouette(np.zeros((10, 2)), np.zeros(10))
