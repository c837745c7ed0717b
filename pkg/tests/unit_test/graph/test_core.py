import networkx as nx
import numpy as np
import pytest

from motif_exposure.etc.errors import ArgumentException, NodeIndexException
from motif_exposure.graph.core import common_neighbor_count, edge_common_neighbors, ego_members, \
    ego_network, four_cliques, from_networkx, to_networkx, triangles
from motif_exposure.model.graph import Graph


class TestGraph:
    def test_from_edges(self):
        g = Graph.from_edges([(0, 1), (1, 2)])

        assert g.node_count == 3
        assert g.edge_count == 2
        assert list(g.degrees) == [1, 2, 1]

    def test_drops_duplicates_and_self_loops(self):
        g = Graph.from_edges([(0, 1), (1, 0), (1, 1)])

        assert g.node_count == 2
        assert g.edge_count == 1
        assert g.dropped_records == 2

    def test_neighbors_sorted(self):
        g = Graph.from_edges([(0, 3), (0, 1), (0, 2)])

        assert list(g.neighbors(0)) == [1, 2, 3]
        assert g.has_edge(0, 2)
        assert not g.has_edge(1, 2)

    def test_node_out_of_range(self, path_graph):
        with pytest.raises(NodeIndexException):
            path_graph.neighbors(3)

        with pytest.raises(NodeIndexException):
            Graph.from_edges([(0, 5)], node_count=3)

    def test_adjacency_symmetric(self, triangle_graph):
        adjacency = triangle_graph.adjacency.toarray()

        assert (adjacency == adjacency.T).all()
        assert adjacency.sum() == 6


class TestEgoNetwork:
    def test_path_hops(self, path_graph):
        assert list(ego_members(path_graph, 0, 0)) == [0]
        assert list(ego_members(path_graph, 0, 1)) == [0, 1]
        assert list(ego_members(path_graph, 0, 2)) == [0, 1, 2]

    def test_induced_edges(self, path_graph):
        ego = ego_network(path_graph, 0, 1)

        assert ego.member_set == {0, 1}
        assert ego.edge_set == {(0, 1)}

    def test_isolate(self):
        g = Graph.from_edges([(0, 1)], node_count=3)
        ego = ego_network(g, 2, 3)

        assert ego.member_set == {2}
        assert len(ego.induced_edges) == 0

    def test_negative_hop(self, path_graph):
        with pytest.raises(ArgumentException):
            ego_members(path_graph, 0, -1)


class TestCommonNeighbors:
    def test_triangle(self, triangle_graph):
        assert common_neighbor_count(triangle_graph, 0, 1) == 1

    def test_path(self, path_graph):
        assert common_neighbor_count(path_graph, 0, 2) == 1
        assert common_neighbor_count(path_graph, 0, 1) == 0

    def test_same_node(self, path_graph):
        with pytest.raises(ArgumentException):
            common_neighbor_count(path_graph, 1, 1)

    def test_edge_counts_on_triangle(self, triangle_graph):
        assert list(edge_common_neighbors(triangle_graph)) == [1] * 6

    def test_edge_counts_match_pairwise(self):
        g = from_networkx(nx.gnp_random_graph(40, 0.2, seed=3))
        counts = edge_common_neighbors(g)

        for position, (u, v) in enumerate(zip(
                np.repeat(np.arange(g.node_count), g.degrees), g.indices)):
            assert counts[position] == common_neighbor_count(g, u, v)


class TestCliques:
    def test_complete_graph(self):
        g = from_networkx(nx.complete_graph(4))

        assert len(triangles(g)) == 4
        assert len(four_cliques(g)) == 1

    def test_matches_networkx(self):
        nx_graph = nx.gnp_random_graph(50, 0.25, seed=8)
        g = from_networkx(nx_graph)

        assert len(triangles(g)) == sum(nx.triangles(nx_graph).values()) // 3

    def test_path_has_none(self, path_graph):
        assert len(triangles(path_graph)) == 0
        assert len(four_cliques(path_graph)) == 0


class TestNetworkxConversion:
    def test_labels_sorted_numerically(self):
        nx_graph = nx.Graph([(10, 2), (2, 1)])
        g = from_networkx(nx_graph)

        assert g.id_map == ['1', '2', '10']
        assert g.has_edge(1, 2)

    def test_attributes_carried(self):
        nx_graph = nx.path_graph(3)
        nx.set_node_attributes(nx_graph, {0: 1, 1: 0, 2: 1}, name='group')
        g = from_networkx(nx_graph, ['group'])

        assert list(g.attribute('group')) == [1.0, 0.0, 1.0]
        assert nx.is_isomorphic(to_networkx(g), nx_graph)
