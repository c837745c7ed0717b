import numpy as np
import pytest
from deepdiff import DeepDiff

from motif_exposure.synth import build_network, matched_sweep_frame, preset_config, \
    replication_seeds, run_harness, run_replication, summary_frame, write_summary_csv
from motif_exposure.synth.harness import MATCHED_SWEEP_COLUMNS, SUMMARY_COLUMNS


TINY = {
    'network': {'n': 120, 'k': 6, 'beta': 0.3},
    'schema': ['Z', '2-1', '3c-2'],
    'replicates': 20,
    'bootstrap': 20,
    'tree': {'kappa': 10, 'max_depth': 2},
    'knn': {'k_grid': [0.1, 0.5]},
    'delta': 0.9,
}


@pytest.fixture(scope='module')
def tiny_config():
    return preset_config('ws-bernoulli', TINY)


class TestSeeds:
    def test_labels_distinct(self):
        seeds = replication_seeds(0)

        assert len(set(seeds.values())) == len(seeds)
        assert seeds == replication_seeds(0)
        assert seeds != replication_seeds(1)

    def test_build_network(self, tiny_config):
        g = build_network(tiny_config.network, 5)

        assert g.node_count == 120
        assert g.edge_count == 360


class TestRunReplication:
    def test_methods_and_truth(self, tiny_config):
        bundle = run_replication(tiny_config, 0, threads=1)

        assert {'naive', 'fracq'} <= set(bundle.estimates)
        assert bundle.truth.tau > 1.0
        assert [row.K for row in bundle.sweep] == [12, 60]
        assert [row.K for row in bundle.fracq_sweep] == [12, 60]
        assert bundle.seeds == replication_seeds(0)

    def test_fractional_q_matched_to_smallest_k(self, tiny_config):
        bundle = run_replication(tiny_config, 2, threads=1)
        smallest = next((row for row in bundle.sweep if row.passes), None)
        matched = next(row for row in bundle.fracq_sweep if row.K == smallest.K) \
            if smallest is not None else None

        if matched is None or matched.gate is None:
            assert 'fracq-matched-k' not in bundle.estimates
        else:
            assert bundle.estimates['fracq-matched-k'].point == matched.tau
            assert bundle.estimates['fracq-matched-k'].label == f'fracq(K={smallest.K})'

    def test_deterministic(self, tiny_config):
        first = run_replication(tiny_config, 3, threads=1).to_dict()
        second = run_replication(tiny_config, 3, threads=1).to_dict()

        assert not DeepDiff(first, second, ignore_nan_inequality=True)

    def test_cluster_design(self):
        config = preset_config('ws-cluster', {**TINY, 'design': {'kind': 'cluster', 'levels': 3}})
        bundle = run_replication(config, 1, threads=1)

        assert 'naive' in bundle.estimates
        assert np.isfinite(bundle.estimates['naive'].point)

    def test_disabled_analyses(self, tiny_config):
        config = tiny_config.model_copy(update={
            'tree': tiny_config.tree.model_copy(update={'enabled': False}),
            'knn': tiny_config.knn.model_copy(update={'enabled': False}),
        })
        bundle = run_replication(config, 0, threads=1)

        assert bundle.tree is None
        assert bundle.sweep == []
        assert bundle.fracq_sweep == []
        assert 'fracq-matched-k' not in bundle.estimates
        assert not {'knn', 'knn-smallest-k', 'tree'} & set(bundle.estimates)


class TestRunHarness:
    def test_summary(self, tiny_config, tmp_path):
        bundles = run_harness(tiny_config, [0, 1], threads=2)
        frame = summary_frame(bundles)

        assert [bundle.seed for bundle in bundles] == [0, 1]
        assert list(frame.columns) == SUMMARY_COLUMNS
        assert set(frame['seed']) == {0, 1}
        assert np.allclose(frame['bias'], frame['estimate'] - frame['oracle_tau'])

        write_summary_csv(bundles, tmp_path / 'summary.csv')
        assert (tmp_path / 'summary.csv').read_text(encoding='utf-8').startswith(
            ','.join(SUMMARY_COLUMNS)
        )

    def test_matched_sweep(self, tiny_config):
        bundles = run_harness(tiny_config, [0, 1], threads=1)
        frame = matched_sweep_frame(bundles)

        assert list(frame.columns) == MATCHED_SWEEP_COLUMNS
        assert len(frame) == 4
        assert frame['K'].tolist() == [12, 60, 12, 60]
        for bundle in bundles:
            rows = frame[frame['seed'] == bundle.seed]
            assert np.allclose(rows['tau_knn'], [row.tau for row in bundle.sweep], equal_nan=True)
            assert np.allclose(rows['tau_fracq'], [row.tau for row in bundle.fracq_sweep],
                               equal_nan=True)
