import numpy as np
import pytest

from motif_exposure.etc.errors import ArgumentException
from motif_exposure.model.assignment import AssignmentVector, ClusterPartition, \
    RandomizationDesign
from motif_exposure.randomization.design import assign, bernoulli_assignment, \
    cluster_assignment, draw_replicate, draw_replicates


class TestBernoulliAssignment:
    def test_deterministic(self):
        first = bernoulli_assignment(500, 0.3, seed=4)
        second = bernoulli_assignment(500, 0.3, seed=4)

        assert (first.z == second.z).all()
        assert first.seed == 4
        assert first.design_tag == 'bernoulli(p=0.3)'

    def test_rate(self):
        n, p = 100_000, 0.3
        z = bernoulli_assignment(n, p, seed=1).z

        assert abs(z.mean() - p) < 3 * np.sqrt(p * (1 - p) / n)

    @pytest.mark.parametrize('p', [0.0, 1.0, -0.2, 1.5])
    def test_probability_outside_open_interval(self, p):
        with pytest.raises(ArgumentException):
            bernoulli_assignment(10, p, seed=0)

    def test_no_units(self):
        with pytest.raises(ArgumentException):
            bernoulli_assignment(0, 0.5, seed=0)


class TestClusterAssignment:
    def test_broadcast(self):
        partition = ClusterPartition(np.array([0, 0, 1, 1, 2, 2, 2]))
        z = cluster_assignment(partition, 0.5, seed=9).z

        for members in partition.members():
            assert len(set(z[members].tolist())) == 1

    def test_single_cluster_is_constant(self):
        partition = ClusterPartition(np.zeros(20, dtype=np.int64))

        for seed in range(10):
            z = cluster_assignment(partition, 0.5, seed=seed).z
            assert z.min() == z.max()

    def test_cluster_rate(self):
        partition = ClusterPartition(np.arange(512))
        treated = cluster_assignment(partition, 0.5, seed=3).z.sum()

        assert abs(treated - 256) <= 3 * np.sqrt(128)

    def test_partition_size_checked(self):
        design = RandomizationDesign.cluster(ClusterPartition(np.array([0, 1, 1])))

        with pytest.raises(ArgumentException):
            assign(design, 4, seed=0)


class TestReplicates:
    def test_order_independent(self):
        design = RandomizationDesign.bernoulli(0.5)
        forward = [draw_replicate(design, 30, 77, b).z for b in range(8)]
        backward = [draw_replicate(design, 30, 77, b).z for b in reversed(range(8))][::-1]

        for first, second in zip(forward, backward):
            assert (first == second).all()

    def test_thread_independent(self):
        design = RandomizationDesign.bernoulli(0.4)
        serial = draw_replicates(design, 50, 20, 5, threads=1)
        threaded = draw_replicates(design, 50, 20, 5, threads=4)

        assert all((a.z == b.z).all() for a, b in zip(serial, threaded))

    def test_replicates_differ(self):
        replicates = draw_replicates(RandomizationDesign.bernoulli(0.5), 64, 5, 0)

        assert len({r.z.tobytes() for r in replicates}) == 5

    def test_per_unit_rate(self):
        B, n, p = 500, 12, 0.5
        z = np.stack([r.z for r in draw_replicates(RandomizationDesign.bernoulli(p), n, B, 13)])

        assert (np.abs(z.mean(axis=0) - p) < 4 * np.sqrt(p * (1 - p) / B)).all()

    def test_needs_one_replicate(self):
        with pytest.raises(ArgumentException):
            draw_replicates(RandomizationDesign.bernoulli(), 10, 0, 0)


class TestAssignmentVector:
    def test_rejects_non_binary(self):
        with pytest.raises(ArgumentException):
            AssignmentVector(np.array([0, 2, 1]), 'observed', None)

    def test_to_dict(self):
        assignment = AssignmentVector(np.array([1, 0, 1]), 'bernoulli(p=0.5)', 3)

        assert assignment.to_dict() == {
            'designTag': 'bernoulli(p=0.5)',
            'seed': 3,
            'nodeCount': 3,
            'treatedCount': 2,
        }

    def test_design_validation(self):
        with pytest.raises(ArgumentException):
            RandomizationDesign.bernoulli(1.0)

        assert RandomizationDesign.bernoulli(0.25).tag == 'bernoulli(p=0.25)'
