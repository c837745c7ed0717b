import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.etc.utils import counter_seed, parallel_map
from motif_exposure.model.assignment import RandomizationDesign
from motif_exposure.model.exposure import ExposureCondition
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema, SamplingConfig
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.representation import draw_uniforms, check_schema
from motif_exposure.randomization.design import draw_replicate
from motif_exposure.store import ReplicateStore, create_store


class ReplicateCache:
    """
    Representations of every unit under B assignment replicates of a design.
    Conditions are evaluated against the cache, never by regenerating replicates.
    """
    def __init__(self,
                 store: ReplicateStore,
                 assignments: np.ndarray,
                 design: RandomizationDesign,
                 schema: MotifSchema,
                 master_seed: int,
                 ):
        """
        Representations of every unit under B assignment replicates.
        :param store: The filled replicate store
        :param assignments: B x N replicate assignments
        :param design: The design the replicates were drawn from
        :param schema: The representation schema
        :param master_seed: Master seed of the replicate stream
        """
        self.store = store
        self.assignments = assignments
        self.design = design
        self.schema = schema
        self.master_seed = master_seed

    @property
    def replicates(self) -> int:
        return self.store.shape[0]

    @property
    def node_count(self) -> int:
        return self.store.shape[1]

    @property
    def representations(self) -> np.ndarray:
        """
        B x N x M array of replicate representations.
        """
        return self.store.array

    def restricted(self, columns: list[int], schema: MotifSchema) -> 'ReplicateCache':
        """
        A cache over a subset of the dimensions, backed by an in-memory copy.
        """
        store = create_store(self.replicates, self.node_count, len(columns), driver='memory')
        for b in range(self.replicates):
            store.write(b, self.representations[b][:, columns])

        return ReplicateCache(store, self.assignments, self.design, schema, self.master_seed)

    def membership(self, condition: ExposureCondition, threads: int = None) -> np.ndarray:
        """
        B x N membership of every unit in every replicate.
        """
        rows = parallel_map(
            lambda b: condition.members(self.representations[b]),
            range(self.replicates),
            threads,
        )

        return np.stack(rows)

    def membership_counts(self, condition: ExposureCondition, threads: int = None) -> np.ndarray:
        return self.membership(condition, threads).sum(axis=0)

    def probabilities(self, condition: ExposureCondition, threads: int = None) -> np.ndarray:
        """
        Monte Carlo exposure probability of every unit, count / (B + 1).
        """
        return self.membership_counts(condition, threads) / (self.replicates + 1.0)

    def close(self):
        self.store.close()


def build_replicate_cache(g: Graph,
                          design: RandomizationDesign,
                          schema: MotifSchema,
                          B: int,       # pylint: disable=invalid-name
                          master_seed: int,
                          sampling: SamplingConfig = None,
                          *,
                          census: MotifCensus = None,
                          threads: int = None,
                          driver: str = None,
                          ) -> ReplicateCache:
    """
    Draw B assignment replicates and build every unit's representation under each.

    Replicate b uses the assignment seeded by (master_seed, b, 0) and fresh
    smoothing draws seeded by (master_seed, b, 1).
    :param g: The graph
    :param design: The randomization design
    :param schema: The representation schema
    :param B: Number of replicates, at least 1
    :param master_seed: Master seed of the replicate stream
    :param sampling: Neighbor sampling for high-degree egos
    :param census: A census already built for (g, schema, sampling)
    :param threads: Upper bound on worker threads
    :param driver: Store driver overriding the configuration
    :return: The filled cache
    """
    if B < 1:
        raise ArgumentException(f'Need at least one replicate, got {B}')
    check_schema(g, schema)

    census = census or MotifCensus(g, schema, sampling)
    store = create_store(B, g.node_count, schema.M, driver)
    assignments = np.empty((B, g.node_count), dtype=np.int8)

    def fill(b: int):
        z = draw_replicate(design, g.node_count, master_seed, b).z
        uniforms = draw_uniforms(g.node_count, schema.M - 1, counter_seed(master_seed, b, 1))
        store.write(b, census.representation(z, uniforms))
        assignments[b] = z

    LOGGER.info('Building %d replicate representations under %s', B, design.tag)
    parallel_map(fill, range(B), threads)

    return ReplicateCache(store, assignments, design, schema, master_seed)
