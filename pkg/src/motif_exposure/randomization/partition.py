import networkx as nx
import numpy as np
from networkx.algorithms.community import kernighan_lin_bisection

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArgumentException, PartitionException
from motif_exposure.etc.utils import counter_rng
from motif_exposure.graph.core import to_networkx
from motif_exposure.model.assignment import ClusterPartition
from motif_exposure.model.graph import Graph


# Passes stop as soon as no improving swap sequence exists, this only bounds the loop.
KL_MAX_PASSES = 10_000


def cut_size(g: Graph, cluster_of: np.ndarray) -> int:
    """
    Number of edges whose endpoints lie in different clusters.
    """
    edges = g.edges()
    cluster_of = np.asarray(cluster_of)

    return int((cluster_of[edges[:, 0]] != cluster_of[edges[:, 1]]).sum())


def kl_bisect(nx_graph: nx.Graph,
              members: np.ndarray,
              rng: np.random.Generator,
              ) -> tuple[np.ndarray, np.ndarray]:
    """
    Balanced bisection of a member set, from a random balanced split refined
    with Kernighan-Lin passes.
    :param nx_graph: The full graph in networkx form
    :param members: Node indices to bisect
    :param rng: Generator for the initial split
    :return: The two halves, sorted, the first of size ceil(n/2)
    """
    shuffled = rng.permutation(members)
    half = (len(shuffled) + 1) // 2
    first, second = set(shuffled[:half].tolist()), set(shuffled[half:].tolist())

    if len(members) < 2 or not second:
        return np.sort(np.fromiter(first, dtype=np.int64)), \
            np.sort(np.fromiter(second, dtype=np.int64))

    subgraph = nx_graph.subgraph(members.tolist())
    before = nx.cut_size(subgraph, first, second)

    refined_first, refined_second = kernighan_lin_bisection(
        subgraph,
        partition=(first, second),
        max_iter=KL_MAX_PASSES,
        seed=int(rng.integers(2 ** 31)),
    )
    after = nx.cut_size(subgraph, refined_first, refined_second)

    if after > before:
        raise PartitionException(
            f'Kernighan-Lin refinement increased the cut from {before} to {after}'
        )

    refined_first = np.sort(np.fromiter(refined_first, dtype=np.int64))
    refined_second = np.sort(np.fromiter(refined_second, dtype=np.int64))
    if len(refined_first) < len(refined_second):
        refined_first, refined_second = refined_second, refined_first

    return refined_first, refined_second


def recursive_kl_partition(g: Graph, levels: int, seed: int) -> ClusterPartition:
    """
    Partition a graph into 2^levels balanced clusters by recursive bisection.

    Every level bisects each current cluster from a random balanced split seeded
    by (seed, level, cluster) and refines it with Kernighan-Lin passes over the
    unweighted cut.
    :param g: The graph
    :param levels: Number of bisection levels, at least 1
    :param seed: Seed of the initial splits
    :return: The cluster partition
    """
    if levels < 1:
        raise ArgumentException(f'Need at least one bisection level, got {levels}')
    if 2 ** levels > g.node_count:
        raise ArgumentException(
            f'Cannot split {g.node_count} nodes into {2 ** levels} clusters'
        )

    nx_graph = to_networkx(g)
    groups = [np.arange(g.node_count, dtype=np.int64)]

    for level in range(levels):
        next_groups = []
        for position, members in enumerate(groups):
            first, second = kl_bisect(nx_graph, members, counter_rng(seed, level, position))
            next_groups.extend([first, second])
        groups = next_groups

        sizes = [len(group) for group in groups]
        if max(sizes) - min(sizes) > 1:
            raise PartitionException(
                f'Unbalanced clusters at level {level}: sizes {min(sizes)}..{max(sizes)}'
            )

    cluster_of = np.empty(g.node_count, dtype=np.int64)
    for cluster, members in enumerate(groups):
        cluster_of[members] = cluster

    partition = ClusterPartition(cluster_of, len(groups))
    LOGGER.info(
        'Partitioned %d nodes into %d clusters with cut size %d',
        g.node_count,
        partition.cluster_count,
        cut_size(g, cluster_of),
    )

    return partition
