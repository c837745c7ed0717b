from typing import Callable

import numpy as np

from motif_exposure.etc.consts import LOGGER, ANALYSIS_CONFIG
from motif_exposure.etc.enums import ResampleUnit
from motif_exposure.etc.errors import ArgumentException, BootstrapException, MotifExposureException
from motif_exposure.etc.utils import counter_rng, parallel_map
from motif_exposure.model.assignment import ClusterPartition


Estimator = Callable[[np.ndarray], float]


def resample_indices(n: int,
                     b: int,
                     seed: int,
                     resample_unit: ResampleUnit = ResampleUnit.UNIT,
                     partition: ClusterPartition = None,
                     ) -> np.ndarray:
    """
    Unit indices of bootstrap resample b.

    Unit mode draws n indices with replacement. Cluster mode draws as many
    clusters as there are with replacement and takes all their members.
    """
    rng = counter_rng(seed, b)

    if resample_unit == ResampleUnit.CLUSTER:
        if partition is None:
            raise ArgumentException('Cluster resampling needs a cluster partition')
        members = partition.members()
        drawn = rng.integers(0, partition.cluster_count, size=partition.cluster_count)

        return np.concatenate([members[c] for c in drawn])

    return rng.integers(0, n, size=n)


def bootstrap_draws(estimator: Estimator,
                    n: int,
                    B: int,       # pylint: disable=invalid-name
                    seed: int,
                    resample_unit: ResampleUnit = ResampleUnit.UNIT,
                    partition: ClusterPartition = None,
                    *,
                    threads: int = None,
                    tolerance: float = None,
                    ) -> np.ndarray:
    """
    Apply an estimator to B with-replacement resamples.

    Resample b depends only on (seed, b). A resample on which the estimator
    raises a toolkit exception is recorded as NaN.
    :param estimator: Pure function of the resampled unit indices
    :param n: Number of units
    :param B: Number of resamples, at least 2
    :param seed: Bootstrap seed
    :param resample_unit: Resample units or whole clusters
    :param partition: Cluster partition for cluster resampling
    :param threads: Upper bound on worker threads
    :param tolerance: Largest tolerated share of failed resamples
    :return: Length-B draws, NaN where the estimator failed
    """
    if B < 2:
        raise ArgumentException(f'Bootstrap needs at least 2 resamples, got {B}')
    if tolerance is None:
        tolerance = ANALYSIS_CONFIG.bootstrap_failure_tolerance

    def draw(b: int) -> float:
        try:
            return float(estimator(resample_indices(n, b, seed, resample_unit, partition)))
        except MotifExposureException:
            return np.nan

    draws = np.asarray(parallel_map(draw, range(B), threads), dtype=np.float64)

    failures = int(np.isnan(draws).sum())
    if failures > tolerance * B:
        raise BootstrapException(
            f'Estimator failed on {failures} of {B} bootstrap resamples'
        )
    if failures:
        LOGGER.warning('Estimator failed on %d of %d bootstrap resamples', failures, B)

    return draws


def draws_se(draws: np.ndarray) -> float:
    """
    Standard deviation of the successful draws, normalised by their count.
    """
    finite = draws[~np.isnan(draws)]
    if len(finite) == 0:
        raise BootstrapException('No successful bootstrap resamples')

    return float(np.std(finite))


def percentile_interval(draws: np.ndarray, level: float = 0.95) -> tuple[float, float]:
    """
    Percentile bootstrap interval, (2.5%, 97.5%) at the default level.
    """
    tail = 50.0 * (1.0 - level)
    low, high = np.nanpercentile(draws, [tail, 100.0 - tail])

    return float(low), float(high)


def bootstrap_se(estimator: Estimator,
                 n: int,
                 B: int,       # pylint: disable=invalid-name
                 seed: int,
                 resample_unit: ResampleUnit = ResampleUnit.UNIT,
                 partition: ClusterPartition = None,
                 *,
                 threads: int = None,
                 ) -> tuple[float, np.ndarray]:
    """
    Bootstrap standard error of an estimator.
    :return: (se, draws)
    """
    draws = bootstrap_draws(estimator, n, B, seed, resample_unit, partition, threads=threads)

    return draws_se(draws), draws
