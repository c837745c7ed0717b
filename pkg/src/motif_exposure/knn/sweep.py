from pathlib import Path

import numpy as np
import pandas as pd

from motif_exposure.etc.consts import LOGGER, ANALYSIS_CONFIG
from motif_exposure.etc.enums import Assumption, EstimatorKind, ResampleUnit
from motif_exposure.etc.errors import ArgumentException, EstimationException, SchemaException, \
    SelectionException, ArtifactNotFoundException
from motif_exposure.etc.utils import parallel_map
from motif_exposure.estimation.gate import estimate_condition, gate_difference
from motif_exposure.exposure.replicates import ReplicateCache
from motif_exposure.model.assignment import ClusterPartition
from motif_exposure.model.exposure import UnitSetCondition
from motif_exposure.model.knn import DistanceMetric, KSweepRow
from motif_exposure.model.motif import RepresentationMatrix, ReferenceRepresentations
from motif_exposure.motif.representation import reference_representations


SWEEP_COLUMNS = ['K', 'K_over_N', 'mu1', 'se1', 'pos1', 'mu0', 'se0', 'pos0', 'tau', 'se_tau']


def knn_condition(reps: RepresentationMatrix,
                  metric: DistanceMetric,
                  reference: np.ndarray,
                  K: int,       # pylint: disable=invalid-name
                  label: str = 'knn',
                  ) -> UnitSetCondition:
    """
    The K units closest to a reference representation, ties to the lower node index.
    """
    if not 1 <= K <= reps.node_count:
        raise ArgumentException(f'K must lie in [1, {reps.node_count}], got {K}')

    return UnitSetCondition(reference, metric.weights, K, label)


def default_k_grid(node_count: int, fractions: tuple[float, ...] = None) -> list[int]:
    """
    K values at fractions of N, each at least 1.
    """
    fractions = fractions or ANALYSIS_CONFIG.k_grid_fractions

    return sorted({min(node_count, max(1, int(round(f * node_count)))) for f in fractions})


class ReferenceRanks:
    """
    Distance ranks of every unit around one reference, in the observed world
    and in every replicate, shared across a K grid.
    """
    def __init__(self,
                 reps: RepresentationMatrix,
                 cache: ReplicateCache,
                 metric: DistanceMetric,
                 reference: np.ndarray,
                 threads: int = None,
                 ):
        condition = UnitSetCondition(reference, metric.weights, 1)

        self.observed = condition.ranks(reps.R)
        self.replicates = np.stack(parallel_map(
            lambda b: condition.ranks(cache.representations[b]).astype(np.int32),
            range(cache.replicates),
            threads,
        ))
        self.denominator = cache.replicates + 1.0

    def members(self, K: int) -> np.ndarray:     # pylint: disable=invalid-name
        return self.observed < K

    def probabilities(self, K: int) -> np.ndarray:     # pylint: disable=invalid-name
        return (self.replicates < K).sum(axis=0) / self.denominator


def sweep_k(reps: RepresentationMatrix,
            cache: ReplicateCache,
            y: np.ndarray,
            metric: DistanceMetric,
            k_grid: list[int],
            *,
            refs: ReferenceRepresentations = None,
            epsilon: float = None,
            delta: float = None,
            kind: EstimatorKind = EstimatorKind.HAJEK,
            B: int = None,        # pylint: disable=invalid-name
            seed: int = 0,
            resample_unit: ResampleUnit = ResampleUnit.UNIT,
            partition: ClusterPartition = None,
            threads: int = None,
            prefix: str = 'knn',
            ) -> list[KSweepRow]:
    """
    Nearest-neighbor gate estimates over a grid of K.

    At each K the conditions are the K units closest to the all-treated and to
    the all-control reference. Exposure probabilities are the shares of
    replicates in which a unit ranks within K.
    :param reps: Observed representations
    :param cache: Replicate cache on the same schema
    :param y: Outcome vector
    :param metric: The distance metric
    :param k_grid: K values, each in [1, N]
    :param refs: Reference representations, derived from the schema when omitted
    :param epsilon: Positivity threshold
    :param delta: Positivity tolerance
    :param kind: Estimator kind
    :param B: Bootstrap resamples
    :param seed: Bootstrap seed shared by all estimates
    :param resample_unit: Resample units or clusters
    :param partition: Cluster partition for cluster resampling
    :param threads: Upper bound on worker threads
    :param prefix: Label prefix of the estimates
    :return: One row per K, in grid order
    """
    if not k_grid:
        raise ArgumentException('The K grid is empty')
    if reps.schema != cache.schema:
        raise SchemaException('Representations and replicate cache use different schemas')
    for K in k_grid:        # pylint: disable=invalid-name
        if not 1 <= K <= reps.node_count:
            raise ArgumentException(f'K must lie in [1, {reps.node_count}], got {K}')

    refs = refs or reference_representations(reps.schema)
    treated_ranks = ReferenceRanks(reps, cache, metric, refs.r1, threads)
    control_ranks = ReferenceRanks(reps, cache, metric, refs.r0, threads)
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

    def side(ranks: ReferenceRanks, K: int, label: str):      # pylint: disable=invalid-name
        try:
            return estimate_condition(y, ranks.members(K), ranks.probabilities(K),
                                      label=f'{label}(K={K})', **options)
        except EstimationException as e:
            LOGGER.warning('No %s estimate at K=%d: %s', label, K, e.message)
            return None

    rows = []
    for K in k_grid:        # pylint: disable=invalid-name
        treated = side(treated_ranks, K, f'{prefix}1')
        control = side(control_ranks, K, f'{prefix}0')
        gate = gate_difference(treated, control, f'{prefix}(K={K})') \
            if treated is not None and control is not None else None
        if gate is not None:
            gate.hyperparameters['K'] = K
            gate.hyperparameters['metric'] = metric.kind.value
        rows.append(KSweepRow(K, reps.node_count, treated, control, gate))
        LOGGER.debug('Sweep row %s', rows[-1])

    return rows


def select_estimate(rows: list[KSweepRow],
                    assumption: Assumption = Assumption.NON_NEGATIVE,
                    se_cap: float = None,
                    ) -> KSweepRow:
    """
    The least biased positivity-passing row under monotone interference:
    the largest gate under non-negative interference, the smallest under
    non-positive interference. Ties go to the smaller K.
    :param rows: Sweep rows
    :param assumption: Direction of the interference
    :param se_cap: Optional cap on the gate SE
    :return: The chosen row
    """
    passing = [row for row in rows
               if row.passes and (se_cap is None or row.se_tau <= se_cap)]
    if not passing:
        verdicts = ', '.join(
            f'K={row.K} (pos1={row.positivity_ok_1}, pos0={row.positivity_ok_0}, '
            f'se_tau={row.se_tau:.4f})'
            for row in rows
        )
        raise SelectionException(f'No sweep row passes positivity: {verdicts}')

    sign = -1.0 if assumption == Assumption.NON_NEGATIVE else 1.0

    return min(passing, key=lambda row: (sign * row.tau, row.K))


def sweep_frame(rows: list[KSweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_dict() for row in rows], columns=SWEEP_COLUMNS)


def write_sweep_csv(rows: list[KSweepRow], path: str | Path):
    sweep_frame(rows).to_csv(path, index=False, lineterminator='\n')


def read_sweep_csv(path: str | Path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFoundException(f'Sweep file not found at {path}')

    return pd.read_csv(path)
