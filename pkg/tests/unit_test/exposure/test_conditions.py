import numpy as np
import pytest

from motif_exposure.etc.errors import ArgumentException
from motif_exposure.exposure.conditions import ConditionRegistry, NeighborFractionCondition
from motif_exposure.model.graph import Graph
from motif_exposure.motif.representation import build_representation_matrix
from motif_exposure.model.exposure import BoxCondition, UnitSetCondition
from motif_exposure.model.motif import MotifSchema, fractional_q_schema


class TestBoxCondition:
    def test_everything_is_closed_cube(self):
        box = BoxCondition.everything(3)

        assert box.contains(np.zeros(3))
        assert box.contains(np.ones(3))
        assert not box.is_empty

    def test_half_open_bounds(self):
        box = BoxCondition([0.2, 0.0], [0.6, 1.0])

        assert not box.contains(np.array([0.2, 0.5]))
        assert box.contains(np.array([0.6, 0.0]))
        assert not box.contains(np.array([0.61, 0.5]))

    def test_split(self):
        left, right = BoxCondition.everything(2, 'R').split(1, 0.4)

        assert left.label == 'RL'
        assert right.label == 'RR'
        assert left.contains(np.array([0.0, 0.4]))
        assert right.contains(np.array([0.0, 0.41]))
        assert not right.contains(np.array([0.0, 0.4]))

    def test_split_at_zero_opens_right_child(self):
        left, right = BoxCondition.everything(2).split(1, 0.0)

        assert left.contains(np.array([1.0, 0.0]))
        assert not right.contains(np.array([1.0, 0.0]))
        assert right.contains(np.array([1.0, 0.01]))

    def test_children_partition_parent(self):
        rng = np.random.default_rng(0)
        R = rng.random((2000, 3))       # pylint: disable=invalid-name
        R[:50, 1] = 0.0
        parent = BoxCondition([0.0, 0.0, 0.1], [1.0, 0.9, 1.0])
        left, right = parent.split(1, 0.3)

        in_left = left.members(R)
        in_right = right.members(R)

        assert not (in_left & in_right).any()
        assert ((in_left | in_right) == parent.members(R)).all()

    def test_empty(self):
        box = BoxCondition([0.5, 0.0], [0.5, 1.0])

        assert box.is_empty
        assert not box.members(np.array([[0.5, 0.5]])).any()

    def test_bounds_checked(self):
        with pytest.raises(ArgumentException):
            BoxCondition([0.0, -0.1], [1.0, 1.0])

        with pytest.raises(ArgumentException):
            BoxCondition([0.0], [1.0, 1.0])

    def test_intersection_and_subset(self):
        first = BoxCondition([0.0, 0.2], [0.8, 1.0])
        second = BoxCondition([0.1, 0.0], [1.0, 0.5])
        both = first.intersection(second)

        assert both.lows.tolist() == [0.1, 0.2]
        assert both.highs.tolist() == [0.8, 0.5]
        assert both.subset_of(first)
        assert both.subset_of(second)
        assert not first.subset_of(second)

    def test_dict(self):
        _, right = BoxCondition.everything(2, 'R').split(0, 0.5)
        restored = BoxCondition.from_dict(right.to_dict())

        assert restored.label == 'RR'
        assert restored.lows.tolist() == right.lows.tolist()
        assert restored.closed.tolist() == right.closed.tolist()


class TestUnitSetCondition:
    def test_ties_broken_by_index(self):
        condition = UnitSetCondition(np.zeros(1), np.ones(1), 2)
        R = np.array([[0.1], [0.2], [0.2]])     # pylint: disable=invalid-name

        assert condition.members(R).tolist() == [True, True, False]
        assert condition.ranks(R).tolist() == [0, 1, 2]

    def test_weighted_distance(self):
        condition = UnitSetCondition(np.array([1.0, 0.0]), np.array([2.0, 0.5]), 1)

        assert condition.distances(np.array([[0.5, 0.4]])).tolist() == pytest.approx([1.2])

    def test_nested_in_k(self):
        R = np.random.default_rng(3).random((40, 3))        # pylint: disable=invalid-name
        reference = np.ones(3)
        previous = np.zeros(40, dtype=bool)

        for K in (1, 5, 10, 40):        # pylint: disable=invalid-name
            members = UnitSetCondition(reference, np.ones(3), K).members(R)
            assert members.sum() == K
            assert (members | ~previous).all()
            previous = members

    def test_k_bounds(self):
        with pytest.raises(ArgumentException):
            UnitSetCondition(np.zeros(2), np.ones(2), 0)

        with pytest.raises(ArgumentException):
            UnitSetCondition(np.zeros(2), np.ones(2), 5).members(np.zeros((3, 2)))


class TestConditionRegistry:
    def test_names(self):
        assert {'everything', 'ego-treated', 'fractional-q'} <= set(ConditionRegistry.names())

    def test_unknown(self):
        with pytest.raises(ArgumentException):
            ConditionRegistry.build('nothing', fractional_q_schema())

    def test_fractional_q_needs_graph(self):
        with pytest.raises(ArgumentException):
            ConditionRegistry.build('fractional-q', fractional_q_schema(), q=0.5)

    def test_fractional_q(self, path_graph):
        condition = ConditionRegistry.build('fractional-q', fractional_q_schema(), 'exposed',
                                            g=path_graph, q=0.5)

        assert isinstance(condition, NeighborFractionCondition)
        assert condition.label == 'exposed'
        assert condition.to_dict()['params'] == {'q': 0.5, 'treated': True, 'above': True}

    def test_ego_treated(self):
        schema = MotifSchema.parse('Z,2-1,3c-2')
        condition = ConditionRegistry.build('ego-treated', schema, label='treated')
        R = np.array([[1.0, 0.0, 0.3], [0.0, 1.0, 1.0]])       # pylint: disable=invalid-name

        assert condition.label == 'treated'
        assert condition.members(R).tolist() == [True, False]
        assert condition.to_dict()['name'] == 'ego-treated'


class TestNeighborFractionCondition:
    def cells(self, g: Graph, units: np.ndarray, q: float = 0.5) -> dict:
        return {
            (treated, above):
                NeighborFractionCondition(g, q, treated, above).members(units).tolist()
            for treated in (True, False) for above in (True, False)
        }

    def test_cells(self):
        g = Graph.from_edges([(0, 1), (0, 2), (0, 3), (3, 4), (1, 4), (4, 5)])
        z = np.array([0, 1, 1, 0, 1, 1])
        units = np.column_stack([z, np.zeros(6)])

        cells = self.cells(g, units)

        assert cells[(True, True)] == [False, False, False, False, True, True]
        assert cells[(True, False)] == [False, True, True, False, False, False]
        assert cells[(False, True)] == [True, False, False, False, False, False]
        assert cells[(False, False)] == [False, False, False, True, False, False]

    def test_cells_partition_units(self, ws_graph):
        z = (np.random.default_rng(4).random(ws_graph.node_count) < 0.5).astype(np.float64)
        R = np.column_stack([z, np.zeros(ws_graph.node_count)])     # pylint: disable=invalid-name

        members = np.array(list(self.cells(ws_graph, R, 0.3).values()))

        assert (members.sum(axis=0) == 1).all()

    def test_half_treated_neighbors_stay_at_or_below_q(self, path_graph):
        z = np.array([1, 1, 0])
        smoothed = []

        for seed in range(40):
            reps = build_representation_matrix(path_graph, z, fractional_q_schema(), seed)
            cells = self.cells(path_graph, reps.R)
            smoothed.append(reps.R[1, 1])

            assert cells[(True, False)][1]
            assert not cells[(True, True)][1]

        assert max(smoothed) > 0.5

    def test_isolate_has_zero_share(self):
        g = Graph.from_edges([(0, 1)], node_count=3)
        R = np.array([[1.0, 0.5], [1.0, 0.5], [1.0, 0.5]])     # pylint: disable=invalid-name

        assert NeighborFractionCondition(g, 0.0).treated_fraction(R[:, 0]).tolist() == [1, 1, 0]
        assert self.cells(g, R, 0.0)[(True, False)] == [False, False, True]

    def test_bounds(self, path_graph):
        with pytest.raises(ArgumentException):
            NeighborFractionCondition(path_graph, 1.0)

        with pytest.raises(ArgumentException):
            NeighborFractionCondition(path_graph, 0.5).members(np.zeros((4, 2)))
