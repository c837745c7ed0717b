import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import EstimatorKind, ResampleUnit
from motif_exposure.etc.errors import ArgumentException, EstimationException, SchemaException
from motif_exposure.exposure.conditions import NeighborFractionCondition
from motif_exposure.exposure.replicates import ReplicateCache
from motif_exposure.model.assignment import ClusterPartition
from motif_exposure.model.estimate import FractionalQReport
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import RepresentationMatrix
from .gate import estimate_condition, gate_difference


TREATED_ABOVE = 'treated>q'
TREATED_BELOW = 'treated<=q'
CONTROL_ABOVE = 'control>q'
CONTROL_BELOW = 'control<=q'


def fractional_q_conditions(g: Graph, q: float) -> dict[str, NeighborFractionCondition]:
    """
    The four cells of own treatment against a treated-neighbor fraction above q.
    """
    return {
        label: NeighborFractionCondition(g, q, treated, above, label)
        for label, treated, above in (
            (TREATED_ABOVE, True, True),
            (TREATED_BELOW, True, False),
            (CONTROL_ABOVE, False, True),
            (CONTROL_BELOW, False, False),
        )
    }


def fractional_q_report(g: Graph,
                        y: np.ndarray,
                        reps: RepresentationMatrix,
                        cache: ReplicateCache,
                        q: float,
                        *,
                        kind: EstimatorKind = EstimatorKind.HAJEK,
                        B: int = None,        # pylint: disable=invalid-name
                        seed: int = 0,
                        resample_unit: ResampleUnit = ResampleUnit.UNIT,
                        partition: ClusterPartition = None,
                        epsilon: float = None,
                        delta: float = None,
                        threads: int = None,
                        ) -> FractionalQReport:
    """
    Fractional q neighborhood exposure analysis: the 2 x 2 table of own
    treatment against a treated-neighbor fraction above q, and the gate
    effect between the fully exposed and the unexposed cells.
    :param g: The graph
    :param y: Outcome vector
    :param reps: Observed representations
    :param cache: Replicate cache built on the same schema
    :param q: Fraction threshold in [0, 1)
    :param kind: Estimator kind
    :param B: Bootstrap resamples
    :param seed: Bootstrap seed shared by all cells
    :param resample_unit: Resample units or clusters
    :param partition: Cluster partition for cluster resampling
    :param epsilon: Positivity threshold
    :param delta: Positivity tolerance
    :param threads: Upper bound on worker threads
    :return: The report
    """
    if reps.schema != cache.schema:
        raise SchemaException('Representations and replicate cache use different schemas')
    if reps.node_count != g.node_count:
        raise ArgumentException(
            f'Representations cover {reps.node_count} units, graph has {g.node_count} nodes'
        )

    options = {
        'kind': kind,
        'B': B,
        'seed': seed,
        'resample_unit': resample_unit,
        'partition': partition,
        'epsilon': epsilon,
        'delta': delta,
        'threads': threads,
    }
    cells = {}

    for label, condition in fractional_q_conditions(g, q).items():
        try:
            cells[label] = estimate_condition(
                y,
                condition.members(reps.R),
                cache.probabilities(condition, threads),
                label=label,
                **options,
            )
        except EstimationException as e:
            if label in (TREATED_ABOVE, CONTROL_BELOW):
                raise
            LOGGER.warning('Cell %s left empty: %s', label, e.message)
            cells[label] = None

    gate = gate_difference(cells[TREATED_ABOVE], cells[CONTROL_BELOW], f'fracq(q={q})')
    gate.hyperparameters['q'] = q

    return FractionalQReport(q, cells, gate)
