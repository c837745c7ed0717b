import numpy as np
import pytest

from motif_exposure.etc.enums import Assumption, EstimatorKind, MetricKind
from motif_exposure.etc.errors import ArgumentException, ArtifactNotFoundException, \
    SelectionException
from motif_exposure.estimation.gate import gate_difference
from motif_exposure.knn import SWEEP_COLUMNS, ReferenceRanks, default_k_grid, fit_metric, \
    knn_condition, read_sweep_csv, select_estimate, sweep_k, write_sweep_csv
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.exposure import PositivityVerdict
from motif_exposure.model.knn import DistanceMetric, KSweepRow
from motif_exposure.motif.representation import reference_representations


def sweep_row(K: int,      # pylint: disable=invalid-name
              tau: float,
              ok1: bool = True,
              ok0: bool = True,
              se: float = 0.1,
              ) -> KSweepRow:
    treated = EstimateReport('knn1', EstimatorKind.HAJEK, tau, se=se,
                             positivity=PositivityVerdict(ok1, 0.0))
    control = EstimateReport('knn0', EstimatorKind.HAJEK, 0.0, se=se,
                             positivity=PositivityVerdict(ok0, 0.0))

    return KSweepRow(K, 100, treated, control, gate_difference(treated, control))


class TestDefaultKGrid:
    def test_fractions(self):
        assert default_k_grid(1000) == [10, 20, 50, 100, 200, 500]

    def test_small_graph(self):
        assert default_k_grid(10) == [1, 2, 5]

    def test_explicit_fractions(self):
        assert default_k_grid(200, (0.5, 1.0)) == [100, 200]


class TestSelectEstimate:
    def test_non_negative_takes_largest(self):
        rows = [sweep_row(10, 3.9), sweep_row(20, 3.5), sweep_row(50, 3.0)]

        assert select_estimate(rows, Assumption.NON_NEGATIVE).K == 10

    def test_non_positive_takes_smallest(self):
        rows = [sweep_row(10, 3.9), sweep_row(20, 3.5), sweep_row(50, 3.0)]

        assert select_estimate(rows, Assumption.NON_POSITIVE).K == 50

    def test_skips_failing_rows(self):
        rows = [sweep_row(10, 3.9, ok1=False), sweep_row(20, 3.5), sweep_row(50, 3.0)]

        assert select_estimate(rows).tau == pytest.approx(3.5)

    def test_none_passing(self):
        rows = [sweep_row(10, 3.9, ok0=False), sweep_row(20, 3.5, ok1=False)]

        with pytest.raises(SelectionException):
            select_estimate(rows)

    def test_ties_to_smaller_k(self):
        rows = [sweep_row(50, 2.0), sweep_row(20, 2.0)]

        assert select_estimate(rows).K == 20

    def test_se_cap(self):
        rows = [sweep_row(10, 3.9, se=1.0), sweep_row(20, 3.5, se=0.1)]

        assert select_estimate(rows, se_cap=0.5).K == 20

    def test_failed_side(self):
        row = KSweepRow(5, 100, None, None, None)

        assert not row.passes
        assert np.isnan(row.tau)


class TestKnnCondition:
    def test_k_bounds(self, experiment):
        metric = fit_metric(experiment.reps, experiment.y)
        r1 = reference_representations(experiment.schema).r1

        with pytest.raises(ArgumentException):
            knn_condition(experiment.reps, metric, r1, experiment.node_count + 1)

        assert knn_condition(experiment.reps, metric, r1, 5).members(experiment.reps.R).sum() == 5

    def test_ranks_nested(self, experiment):
        metric = DistanceMetric(MetricKind.IDENTICAL, np.ones(experiment.schema.M))
        ranks = ReferenceRanks(experiment.reps, experiment.cache, metric,
                               reference_representations(experiment.schema).r1)
        previous_members = np.zeros(experiment.node_count, dtype=bool)
        previous_probs = np.zeros(experiment.node_count)

        for K in (1, 10, 50, 150, experiment.node_count):       # pylint: disable=invalid-name
            members = ranks.members(K)
            probs = ranks.probabilities(K)
            assert members.sum() == K
            assert (members | ~previous_members).all()
            assert (probs >= previous_probs).all()
            previous_members, previous_probs = members, probs


class TestSweepK:
    def test_full_k_is_population_mean(self, experiment):
        metric = fit_metric(experiment.reps, experiment.y)
        rows = sweep_k(experiment.reps, experiment.cache, experiment.y, metric,
                       [experiment.node_count], B=10, seed=2)
        row = rows[0]

        assert row.mu1 == pytest.approx(experiment.y.mean())
        assert row.mu0 == pytest.approx(experiment.y.mean())
        assert row.tau == pytest.approx(0.0, abs=1e-9)

    def test_rows_and_csv(self, experiment, tmp_path):
        metric = fit_metric(experiment.reps, experiment.y)
        rows = sweep_k(experiment.reps, experiment.cache, experiment.y, metric,
                       [30, 90, 150], B=10, seed=2, delta=1.0)

        assert [row.K for row in rows] == [30, 90, 150]
        assert all(row.gate.hyperparameters['K'] == row.K for row in rows)

        write_sweep_csv(rows, tmp_path / 'sweep.csv')
        frame = read_sweep_csv(tmp_path / 'sweep.csv')

        assert list(frame.columns) == SWEEP_COLUMNS
        assert frame['K'].tolist() == [30, 90, 150]
        assert frame['K_over_N'].tolist() == pytest.approx([0.1, 0.3, 0.5])

    def test_horvitz_thompson_noisier_than_hajek(self, experiment):
        metric = fit_metric(experiment.reps, experiment.y)
        grid = [30, 60, 90, 150, 240]
        options = {'B': 50, 'seed': 4, 'delta': 1.0}

        ht = sweep_k(experiment.reps, experiment.cache, experiment.y, metric, grid,
                     kind=EstimatorKind.HT, **options)
        hajek = sweep_k(experiment.reps, experiment.cache, experiment.y, metric, grid,
                        kind=EstimatorKind.HAJEK, **options)
        pairs = [(a.se_tau, b.se_tau) for a, b in zip(ht, hajek)
                 if np.isfinite(a.se_tau) and np.isfinite(b.se_tau)]

        assert len(pairs) == len(grid)
        assert np.mean([a > b for a, b in pairs]) >= 0.9

    def test_estimates_shrink_toward_population_contrast(self, experiment):
        metric = fit_metric(experiment.reps, experiment.y)
        grid = [15, 30, 75, 150, experiment.node_count]
        rows = sweep_k(experiment.reps, experiment.cache, experiment.y, metric, grid,
                       B=50, seed=6, delta=1.0)
        se = np.array([row.se_tau for row in rows])
        tau = np.array([row.tau for row in rows])

        assert np.isfinite(se).all()
        assert np.mean(np.diff(se) <= 0) >= 0.75
        assert (np.diff(tau) <= 2 * se[:-1]).all()
        assert tau[0] > tau[-1]

    def test_grid_validation(self, experiment):
        metric = fit_metric(experiment.reps, experiment.y)

        with pytest.raises(ArgumentException):
            sweep_k(experiment.reps, experiment.cache, experiment.y, metric, [], B=10)

        with pytest.raises(ArgumentException):
            sweep_k(experiment.reps, experiment.cache, experiment.y, metric, [0], B=10)

    def test_missing_csv(self, tmp_path):
        with pytest.raises(ArtifactNotFoundException):
            read_sweep_csv(tmp_path / 'sweep.csv')
