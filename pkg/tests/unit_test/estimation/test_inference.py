import numpy as np
import pytest

from motif_exposure.etc.errors import ArgumentException, InferenceException
from motif_exposure.estimation.inference import FocalRerandomizer, build_focal_set, \
    exact_p_value, focal_statistic
from motif_exposure.exposure.conditions import ConditionRegistry
from motif_exposure.model.assignment import ClusterPartition, RandomizationDesign
from motif_exposure.model.estimate import FocalSet
from motif_exposure.model.exposure import BoxCondition
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.representation import build_representation_matrix
from motif_exposure.randomization.design import assign


def path(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)])


def ego_conditions(experiment):
    treated = ConditionRegistry.build('ego-treated', experiment.schema, 'treated', treated=True)
    control = ConditionRegistry.build('ego-treated', experiment.schema, 'control', treated=False)

    return treated, control


class TestFocalSet:
    def test_greedy_descending(self):
        g = path(5)
        ones = np.ones(5, dtype=bool)
        probs = np.full(5, 0.5)

        focal = build_focal_set(g, ones, ~ones, probs, probs, 1)

        assert focal.units.tolist() == [1, 4]
        assert len(focal) == 2

    def test_ego_networks_disjoint(self, ws_graph):
        n = ws_graph.node_count
        member = np.random.default_rng(0).random(n) < 0.5
        probs = np.full(n, 0.5)

        focal = build_focal_set(ws_graph, member, ~member, probs, probs, 2)
        seen = set()
        for i in focal.units:
            reached = {int(i)}
            for _ in range(2):
                reached |= {int(j) for u in reached for j in ws_graph.neighbors(u)}
            assert not reached & seen
            seen |= reached

    def test_needs_positive_probabilities(self):
        g = path(3)
        ones = np.ones(3, dtype=bool)

        with pytest.raises(InferenceException):
            build_focal_set(g, ones, ~ones, np.full(3, 0.5), np.zeros(3), 1)

    def test_hop_bounds(self):
        g = path(3)
        ones = np.ones(3, dtype=bool)

        with pytest.raises(ArgumentException):
            build_focal_set(g, ones, ~ones, np.ones(3), np.ones(3), 0)


class TestFocalStatistic:
    def test_value(self):
        statistic = focal_statistic(np.array([2.0, 1.0]), np.array([True, False]),
                                    np.array([False, True]), np.full(2, 0.5), np.full(2, 0.5))

        assert statistic == pytest.approx(2.0)


class TestFocalRerandomizer:
    PARTITION = ClusterPartition(np.array([0, 0, 1, 1, 1, 1, 1, 2, 2]))

    def rerandomizer(self, design: RandomizationDesign) -> FocalRerandomizer:
        g = path(9)
        schema = MotifSchema.parse('Z,2-1')
        treated = ConditionRegistry.build('ego-treated', schema, 'treated', treated=True)
        control = ConditionRegistry.build('ego-treated', schema, 'control', treated=False)
        focal = FocalSet(np.array([1, 7]), 1, ('treated', 'control'))

        return FocalRerandomizer(g, design, np.zeros(9, dtype=np.int8), MotifCensus(g, schema),
                                 focal, (treated, control))

    def test_cluster_redraw_keeps_clusters_whole(self):
        rerandomizer = self.rerandomizer(RandomizationDesign.cluster(self.PARTITION))
        mixed_draws = 0

        for b in range(30):
            z, in_a, in_b = rerandomizer.sample(5, b)

            for members in self.PARTITION.members():
                assert len(np.unique(z[members])) == 1
            assert (in_a == (z[[1, 7]] == 1)).all()
            assert (in_a ^ in_b).all()
            mixed_draws += int(z[2] != z[0])

        assert mixed_draws > 0

    def test_bernoulli_redraw_stays_inside_ego_networks(self):
        rerandomizer = self.rerandomizer(RandomizationDesign.bernoulli())

        for b in range(10):
            z, _, _ = rerandomizer.sample(5, b)

            assert not z[3:6].any()


class TestExactPValue:
    def test_null_outcomes(self, experiment):
        treated, control = ego_conditions(experiment)
        n = experiment.node_count

        result = exact_p_value(
            experiment.g, experiment.design, experiment.assignment.z, np.zeros(n),
            treated, control, 1, 20, 3,
            reps=experiment.reps,
            probs_a=experiment.cache.probabilities(treated),
            probs_b=experiment.cache.probabilities(control),
            census=experiment.census,
        )

        assert result.p_value == pytest.approx(1.0)
        assert result.statistic == 0.0
        assert len(result.draws) == 20

    def test_p_value_range_and_determinism(self, experiment):
        treated, control = ego_conditions(experiment)
        options = {
            'reps': experiment.reps,
            'probs_a': experiment.cache.probabilities(treated),
            'probs_b': experiment.cache.probabilities(control),
            'census': experiment.census,
        }

        first = exact_p_value(experiment.g, experiment.design, experiment.assignment.z,
                              experiment.y, treated, control, 1, 30, 11, **options)
        second = exact_p_value(experiment.g, experiment.design, experiment.assignment.z,
                               experiment.y, treated, control, 1, 30, 11, **options)

        assert 1 / 31 <= first.p_value <= 1.0
        assert first.p_value == second.p_value
        assert np.array_equal(first.draws, second.draws)
        assert first.to_dict()['conditions'] == ['treated', 'control']

    def test_overlapping_conditions(self, experiment):
        everything = BoxCondition.everything(experiment.schema.M)
        treated, _ = ego_conditions(experiment)
        probs = np.full(experiment.node_count, 0.5)

        with pytest.raises(ArgumentException):
            exact_p_value(experiment.g, experiment.design, experiment.assignment.z, experiment.y,
                          everything, treated, 1, 10, 0,
                          reps=experiment.reps, probs_a=probs, probs_b=probs)

    def test_null_p_values_are_super_uniform(self, ws_graph):
        design = RandomizationDesign.bernoulli()
        schema = MotifSchema.parse('Z,2-1')
        census = MotifCensus(ws_graph, schema)
        treated = ConditionRegistry.build('ego-treated', schema, 'treated', treated=True)
        control = ConditionRegistry.build('ego-treated', schema, 'control', treated=False)
        probs = np.full(ws_graph.node_count, 0.5)
        y = np.random.default_rng(8).normal(size=ws_graph.node_count)

        p_values = []
        for s in range(60):
            z = assign(design, ws_graph.node_count, seed=200 + s)
            reps = build_representation_matrix(ws_graph, z, schema, s, census=census)
            result = exact_p_value(ws_graph, design, z.z, y, treated, control, 1, 49, 500 + s,
                                   reps=reps, probs_a=probs, probs_b=probs, census=census)
            p_values.append(result.p_value)

        p_values = np.array(p_values)
        assert np.mean(p_values <= 0.1) <= 0.2
        assert np.mean(p_values <= 0.05) <= 0.15
