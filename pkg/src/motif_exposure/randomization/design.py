import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import DesignKind
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.etc.utils import counter_seed, parallel_map
from motif_exposure.model.assignment import AssignmentVector, ClusterPartition, \
    RandomizationDesign


def _check_probability(p: float):
    if not 0.0 < p < 1.0:
        raise ArgumentException(f'Treatment probability must be in (0, 1), got {p}')


def bernoulli_assignment(n: int, p: float, seed: int) -> AssignmentVector:
    """
    Independent Bernoulli(p) treatment for each of n units.
    :param n: Number of units, at least 1
    :param p: Treatment probability in (0, 1)
    :param seed: Seed of the draw
    :return: The assignment vector
    """
    _check_probability(p)
    if n < 1:
        raise ArgumentException(f'Need at least one unit, got {n}')

    rng = np.random.default_rng(seed)
    z = (rng.random(n) < p).astype(np.int8)

    return AssignmentVector(z, f'bernoulli(p={p})', seed)


def cluster_assignment(partition: ClusterPartition, p: float, seed: int) -> AssignmentVector:
    """
    One Bernoulli(p) draw per cluster, broadcast to the cluster's members.
    :param partition: The cluster partition
    :param p: Treatment probability in (0, 1)
    :param seed: Seed of the draw
    :return: The assignment vector
    """
    _check_probability(p)

    rng = np.random.default_rng(seed)
    treated_clusters = (rng.random(partition.cluster_count) < p).astype(np.int8)

    return AssignmentVector(
        treated_clusters[partition.cluster_of],
        f'cluster(p={p},clusters={partition.cluster_count})',
        seed,
    )


def assign(design: RandomizationDesign, n: int, seed: int) -> AssignmentVector:
    """
    Draw one assignment from a design.
    """
    if design.kind == DesignKind.CLUSTER:
        if len(design.partition.cluster_of) != n:
            raise ArgumentException(
                f'Partition covers {len(design.partition.cluster_of)} nodes, expected {n}'
            )
        return cluster_assignment(design.partition, design.p, seed)

    return bernoulli_assignment(n, design.p, seed)


def replicate_seed(master_seed: int, b: int) -> int:
    """
    Seed of assignment replicate b under a master seed.
    """
    return counter_seed(master_seed, b, 0)


def draw_replicate(design: RandomizationDesign,
                   n: int,
                   master_seed: int,
                   b: int,
                   ) -> AssignmentVector:
    return assign(design, n, replicate_seed(master_seed, b))


def draw_replicates(design: RandomizationDesign,
                    n: int,
                    B: int,
                    master_seed: int,
                    threads: int = None,
                    ) -> list[AssignmentVector]:
    """
    A reproducible stream of assignment replicates.

    Replicate b depends only on (design, n, master_seed, b), so the stream is the
    same whatever order or thread count it is consumed with.
    :param design: The randomization design
    :param n: Number of units
    :param B: Number of replicates, at least 1
    :param master_seed: The master seed
    :param threads: Upper bound on worker threads
    :return: B assignment vectors
    """
    if B < 1:
        raise ArgumentException(f'Need at least one replicate, got {B}')

    LOGGER.debug('Drawing %d replicates of %s with master seed %d', B, design.tag, master_seed)

    return parallel_map(
        lambda b: draw_replicate(design, n, master_seed, b),
        range(B),
        threads,
    )
