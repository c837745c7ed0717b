import numpy as np
import pytest

from motif_exposure.etc.enums import EstimatorKind, ResampleUnit
from motif_exposure.etc.errors import ArgumentException, BootstrapException, EstimationException
from motif_exposure.estimation.bootstrap import bootstrap_draws, bootstrap_se, draws_se, \
    percentile_interval, resample_indices
from motif_exposure.estimation.gate import estimate_condition
from motif_exposure.estimation.weighting import weighted_point
from motif_exposure.model.assignment import ClusterPartition, RandomizationDesign
from motif_exposure.randomization.design import assign


class TestResampleIndices:
    def test_deterministic(self):
        assert np.array_equal(resample_indices(50, 3, 9), resample_indices(50, 3, 9))
        assert not np.array_equal(resample_indices(50, 3, 9), resample_indices(50, 4, 9))

    def test_cluster_mode_takes_whole_clusters(self):
        partition = ClusterPartition(np.repeat(np.arange(5), 4))
        idx = resample_indices(20, 0, 1, ResampleUnit.CLUSTER, partition)

        assert len(idx) == 20
        clusters = partition.cluster_of[idx]
        for c in np.unique(clusters):
            assert (clusters == c).sum() % 4 == 0

    def test_cluster_mode_needs_partition(self):
        with pytest.raises(ArgumentException):
            resample_indices(10, 0, 0, ResampleUnit.CLUSTER)


class TestBootstrapSe:
    def test_constant_outcome(self):
        y = np.full(100, 3.0)
        se, draws = bootstrap_se(lambda idx: y[idx].mean(), 100, 50, 2)

        assert se == pytest.approx(0.0, abs=1e-12)
        assert len(draws) == 50

    def test_standard_error_of_mean(self):
        y = np.random.default_rng(0).normal(size=2000)
        se, _ = bootstrap_se(lambda idx: y[idx].mean(), 2000, 500, 1)

        assert abs(se - 1 / np.sqrt(2000)) < 0.25 / np.sqrt(2000)

    def test_thread_independent(self):
        y = np.random.default_rng(1).normal(size=100)

        serial = bootstrap_draws(lambda idx: y[idx].mean(), 100, 40, 3, threads=1)
        threaded = bootstrap_draws(lambda idx: y[idx].mean(), 100, 40, 3, threads=4)

        assert np.array_equal(serial, threaded)

    def test_cluster_bootstrap_on_cluster_means(self):
        partition = ClusterPartition(np.repeat(np.arange(10), 5))
        means = np.random.default_rng(2).normal(size=10)
        y = means[partition.cluster_of]

        clustered = bootstrap_draws(lambda idx: y[idx].mean(), 50, 30, 4,
                                    ResampleUnit.CLUSTER, partition)
        collapsed = bootstrap_draws(lambda idx: means[idx].mean(), 10, 30, 4)

        assert np.allclose(clustered, collapsed)

    def test_needs_two_resamples(self):
        with pytest.raises(ArgumentException):
            bootstrap_draws(lambda idx: 0.0, 10, 1, 0)


class TestCalibration:
    def test_se_matches_rerandomization_spread(self):
        n = 2000
        design = RandomizationDesign.bernoulli(0.5)
        probs = np.full(n, 0.5)
        rng = np.random.default_rng(12)

        points, ses = [], []
        for s in range(200):
            z = assign(design, n, seed=s).z
            y = rng.normal(1.0 + z, 1.0)
            if s < 10:
                report = estimate_condition(y, z == 1, probs, B=500, seed=s, epsilon=0.1,
                                            delta=1.0)
                ses.append(report.se)
            points.append(weighted_point(y, z == 1, probs, EstimatorKind.HAJEK))

        spread = np.std(points, ddof=1)
        assert abs(np.mean(ses) - spread) <= 0.25 * spread


class TestFailures:
    @staticmethod
    def flaky(idx: np.ndarray) -> float:
        if idx[0] % 2 == 0:
            raise EstimationException('empty resample')
        return float(idx.mean())

    def test_too_many_failures(self):
        with pytest.raises(BootstrapException):
            bootstrap_draws(self.flaky, 100, 100, 0)

    def test_failures_recorded_as_nan(self):
        draws = bootstrap_draws(self.flaky, 100, 100, 0, tolerance=0.9)

        assert np.isnan(draws).any()
        assert np.isfinite(draws_se(draws))

    def test_no_successful_draws(self):
        with pytest.raises(BootstrapException):
            draws_se(np.full(5, np.nan))


class TestPercentileInterval:
    def test_default_level(self):
        assert percentile_interval(np.arange(101.0)) == pytest.approx((2.5, 97.5))

    def test_ignores_nan(self):
        draws = np.append(np.arange(101.0), np.nan)

        assert percentile_interval(draws, 0.9) == pytest.approx((5.0, 95.0))
