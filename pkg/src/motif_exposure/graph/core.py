import networkx as nx
import numpy as np
import pandas as pd

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.model.graph import Graph, EgoNetwork


def ego_members(g: Graph, i: int, n: int) -> np.ndarray:
    """
    The n-hop neighbor set of unit i, sorted ascending.
    :param g: The graph
    :param i: The ego node index
    :param n: Hop count, n >= 0
    :return: Sorted member indices including i
    """
    i = g.check_node(i)
    if n < 0:
        raise ArgumentException(f'Hop count must be non-negative, got {n}')

    visited = np.zeros(g.node_count, dtype=bool)
    visited[i] = True
    frontier = np.array([i], dtype=np.int64)

    for _ in range(n):
        if len(frontier) == 0:
            break
        reached = np.concatenate([g.indices[g.indptr[u]:g.indptr[u + 1]] for u in frontier])
        reached = np.unique(reached)
        frontier = reached[~visited[reached]]
        visited[frontier] = True

    return np.flatnonzero(visited)


def ego_network(g: Graph, i: int, n: int) -> EgoNetwork:
    """
    Extract the n-hop ego network of unit i with its induced edges.
    :param g: The graph
    :param i: The ego node index
    :param n: Hop count, n >= 0
    :return: The ego network
    """
    members = ego_members(g, i, n)

    inside = np.zeros(g.node_count, dtype=bool)
    inside[members] = True

    edge_rows = []
    for u in members:
        row = g.indices[g.indptr[u]:g.indptr[u + 1]]
        row = row[(row > u) & inside[row]]
        if len(row):
            edge_rows.append(np.stack([np.full(len(row), u, dtype=np.int64), row], axis=1))

    induced = np.concatenate(edge_rows) if edge_rows else np.empty((0, 2), dtype=np.int64)

    return EgoNetwork(center=int(i), hop=n, members=members, induced_edges=induced)


def common_neighbor_count(g: Graph, i: int, j: int) -> int:
    """
    Number of common neighbors of two distinct nodes.
    :param g: The graph
    :param i: First node index
    :param j: Second node index
    :return: |N(i) & N(j) - {i, j}|
    """
    i = g.check_node(i)
    j = g.check_node(j)
    if i == j:
        raise ArgumentException(
            f'Common neighbor count needs two distinct nodes, got {i} twice'
        )

    # no self-loops, so neither endpoint can be in the intersection
    return len(np.intersect1d(g.neighbors(i), g.neighbors(j), assume_unique=True))


def triangles(g: Graph) -> np.ndarray:
    """
    Every triangle once as a sorted triple (u < v < w).
    """
    found = []

    for u, v in g.edges():
        row_u = g.indices[g.indptr[u]:g.indptr[u + 1]]
        row_v = g.indices[g.indptr[v]:g.indptr[v + 1]]
        common = np.intersect1d(row_u[row_u > v], row_v[row_v > v], assume_unique=True)
        if len(common):
            block = np.empty((len(common), 3), dtype=np.int64)
            block[:, 0] = u
            block[:, 1] = v
            block[:, 2] = common
            found.append(block)

    result = np.concatenate(found) if found else np.empty((0, 3), dtype=np.int64)
    LOGGER.debug('Enumerated %d triangles', len(result))

    return result


def four_cliques(g: Graph, tris: np.ndarray = None) -> np.ndarray:
    """
    Every 4-clique once as a sorted quadruple.
    :param g: The graph
    :param tris: Precomputed output of triangles(g)
    """
    if tris is None:
        tris = triangles(g)

    found = []
    for u, v, w in tris:
        row_w = g.indices[g.indptr[w]:g.indptr[w + 1]]
        candidates = row_w[row_w > w]
        if len(candidates) == 0:
            continue
        candidates = np.intersect1d(candidates, g.indices[g.indptr[u]:g.indptr[u + 1]],
                                    assume_unique=True)
        candidates = np.intersect1d(candidates, g.indices[g.indptr[v]:g.indptr[v + 1]],
                                    assume_unique=True)
        if len(candidates):
            block = np.empty((len(candidates), 4), dtype=np.int64)
            block[:, :3] = (u, v, w)
            block[:, 3] = candidates
            found.append(block)

    result = np.concatenate(found) if found else np.empty((0, 4), dtype=np.int64)
    LOGGER.debug('Enumerated %d 4-cliques', len(result))

    return result


def edge_common_neighbors(g: Graph, tris: np.ndarray = None) -> np.ndarray:
    """
    Common neighbor count for every stored adjacency entry.
    :param g: The graph
    :param tris: Precomputed output of triangles(g)
    :return: Array aligned with g.indices
    """
    if tris is None:
        tris = triangles(g)

    counts = np.zeros(len(g.indices), dtype=np.int64)
    if len(tris) == 0:
        return counts

    for a, b in ((0, 1), (0, 2), (1, 2)):
        u = tris[:, a]
        v = tris[:, b]
        counts += np.bincount(g.edge_positions(u, v), minlength=len(counts))
        counts += np.bincount(g.edge_positions(v, u), minlength=len(counts))

    return counts


def from_networkx(nx_graph: nx.Graph, attr_columns: list[str] = None) -> Graph:
    """
    Convert a networkx graph, reindexing nodes by sorted label.
    :param nx_graph: The networkx graph, directed edges are symmetrised
    :param attr_columns: Node data keys to carry into the attribute table
    :return: The converted graph
    """
    labels = sorted(nx_graph.nodes(), key=node_sort_key)
    index = {label: i for i, label in enumerate(labels)}

    edges = np.array(
        [(index[u], index[v]) for u, v in nx_graph.edges()],
        dtype=np.int64,
    ).reshape(-1, 2)

    attrs = None
    if attr_columns:
        attrs = pd.DataFrame({
            column: [nx_graph.nodes[label].get(column, np.nan) for label in labels]
            for column in attr_columns
        })

    return Graph.from_edges(
        edges,
        len(labels),
        attrs=attrs,
        id_map=[str(label) for label in labels],
    )


def to_networkx(g: Graph) -> nx.Graph:
    """
    Convert to a networkx graph labelled by dense index, with attributes as node data.
    """
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.node_count))
    nx_graph.add_edges_from((int(u), int(v)) for u, v in g.edges())

    for column in g.attrs.columns:
        nx.set_node_attributes(
            nx_graph,
            dict(enumerate(g.attrs[column].tolist())),
            name=column,
        )

    return nx_graph


def node_sort_key(label):
    """
    Numeric labels sort numerically and before any other label.
    """
    try:
        return 0, int(str(label)), str(label)
    except ValueError:
        return 1, 0, str(label)
