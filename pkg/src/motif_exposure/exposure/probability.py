import json
from pathlib import Path

import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.model.assignment import RandomizationDesign
from motif_exposure.model.exposure import ExposureCondition, ExposureProbabilityTable, \
    PositivityVerdict
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema, SamplingConfig
from .replicates import ReplicateCache, build_replicate_cache


def estimate_membership_prob(g: Graph,
                             design: RandomizationDesign,
                             schema: MotifSchema,
                             conditions: list[ExposureCondition],
                             B: int,       # pylint: disable=invalid-name
                             master_seed: int,
                             sampling: SamplingConfig = None,
                             *,
                             cache: ReplicateCache = None,
                             threads: int = None,
                             ) -> ExposureProbabilityTable:
    """
    Monte Carlo probability of every unit falling in every condition.

    P(R_i in R) is estimated as the number of replicates with R_i in R over B + 1.
    :param g: The graph
    :param design: The randomization design
    :param schema: The representation schema
    :param conditions: The exposure conditions
    :param B: Number of replicates, at least 1
    :param master_seed: Master seed of the replicate stream
    :param sampling: Neighbor sampling for high-degree egos
    :param cache: A replicate cache already built for these arguments
    :param threads: Upper bound on worker threads
    :return: N x K probability table
    """
    if B < 1:
        raise ArgumentException(f'Need at least one replicate, got {B}')

    if cache is None:
        cache = build_replicate_cache(g, design, schema, B, master_seed, sampling,
                                      threads=threads)
    elif cache.replicates != B or cache.master_seed != master_seed:
        raise ArgumentException('Replicate cache does not match the requested B and seed')

    probs = np.empty((g.node_count, len(conditions)))
    for k, condition in enumerate(conditions):
        probs[:, k] = cache.probabilities(condition, threads)
        LOGGER.debug(
            'Condition %s: mean exposure probability %.4f',
            condition.label,
            float(probs[:, k].mean()) if g.node_count else 0.0,
        )

    return ExposureProbabilityTable(
        probs,
        [condition.label for condition in conditions],
        B,
        design.tag,
        master_seed,
    )


def check_positivity(probs: np.ndarray,
                     epsilon: float = 0.0,
                     delta: float = 0.01,
                     ) -> PositivityVerdict:
    """
    Check that the share of units with probability at most epsilon is within delta.
    :param probs: Per-unit exposure probabilities of one condition
    :param epsilon: Probability threshold
    :param delta: Tolerated share of violating units
    :return: The verdict with the violating share
    """
    probs = np.asarray(probs, dtype=np.float64)
    violating = float(np.mean(probs <= epsilon)) if len(probs) else 0.0

    return PositivityVerdict(violating <= delta, violating, epsilon=epsilon, delta=delta)


def write_probability_table(g: Graph, table: ExposureProbabilityTable, path: str | Path):
    """
    Write a probability table as "node_id,<labels>" CSV plus a sidecar JSON.
    """
    table.to_frame(g.id_map).to_csv(path, index=False, lineterminator='\n')

    with open(Path(path).with_suffix('.json'), 'w', encoding='utf-8') as file:
        json.dump(table.metadata(), file, indent=2, sort_keys=True)
