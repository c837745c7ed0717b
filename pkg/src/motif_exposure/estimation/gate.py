import numpy as np

from motif_exposure.etc.consts import ANALYSIS_CONFIG
from motif_exposure.etc.enums import EstimatorKind, ResampleUnit
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.exposure.probability import check_positivity
from motif_exposure.model.assignment import ClusterPartition
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.exposure import PositivityVerdict
from .bootstrap import bootstrap_draws, draws_se, percentile_interval
from .weighting import weighted_point, drop_unreachable


def estimate_condition(y: np.ndarray,
                       member: np.ndarray,
                       probs: np.ndarray,
                       *,
                       kind: EstimatorKind = EstimatorKind.HAJEK,
                       label: str = 'mu',
                       B: int = None,        # pylint: disable=invalid-name
                       seed: int = 0,
                       resample_unit: ResampleUnit = ResampleUnit.UNIT,
                       partition: ClusterPartition = None,
                       epsilon: float = None,
                       delta: float = None,
                       threads: int = None,
                       ) -> EstimateReport:
    """
    Weighted mean of a condition with its positivity verdict and bootstrap SE.

    Members with exposure probability 0 are dropped and counted first.
    Reports sharing a bootstrap seed and B are resampled on the same unit
    indices, so their draws can be differenced jointly.
    :param y: Outcome vector
    :param member: Observed membership of the condition
    :param probs: Per-unit exposure probabilities of the condition
    :param kind: Estimator kind
    :param label: Estimand label
    :param B: Bootstrap resamples, defaults to configuration
    :param seed: Bootstrap seed
    :param resample_unit: Resample units or clusters
    :param partition: Cluster partition for cluster resampling
    :param epsilon: Positivity threshold, defaults to configuration
    :param delta: Positivity tolerance, defaults to configuration
    :param threads: Upper bound on worker threads
    :return: The full report
    """
    B = B or ANALYSIS_CONFIG.bootstrap_replicates      # pylint: disable=invalid-name
    epsilon = ANALYSIS_CONFIG.epsilon if epsilon is None else epsilon
    delta = ANALYSIS_CONFIG.delta if delta is None else delta

    y = np.asarray(y, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    member, dropped = drop_unreachable(np.asarray(member, dtype=bool), probs, label)

    point = weighted_point(y, member, probs, kind)
    draws = bootstrap_draws(
        lambda idx: weighted_point(y[idx], member[idx], probs[idx], kind),
        len(y),
        B,
        seed,
        resample_unit,
        partition,
        threads=threads,
    )

    return EstimateReport(
        label,
        kind,
        point,
        se=draws_se(draws),
        draws=draws,
        member_count=int(member.sum()),
        positivity=check_positivity(probs, epsilon, delta),
        seeds={'bootstrap': seed},
        hyperparameters={'resample': resample_unit.value, 'epsilon': epsilon, 'delta': delta},
        interval=percentile_interval(draws),
        dropped_count=dropped,
    )


def _joint_verdict(a: PositivityVerdict, b: PositivityVerdict) -> PositivityVerdict | None:
    if a is None or b is None:
        return a or b

    return PositivityVerdict(
        a.ok and b.ok,
        max(a.violating_fraction, b.violating_fraction),
        epsilon=a.epsilon,
        delta=a.delta,
    )


def gate_difference(report_a: EstimateReport,
                    report_b: EstimateReport,
                    label: str = None,
                    ) -> EstimateReport:
    """
    Difference of two condition means.

    The SE comes from the differenced draws when both reports were bootstrapped
    on the same resamples, otherwise from the sum of variances, flagged
    "independent".
    :param report_a: Estimate of the first condition
    :param report_b: Estimate of the second condition
    :param label: Label of the difference
    :return: The difference report
    """
    if report_a.kind != report_b.kind:
        raise ArgumentException(
            f'Cannot difference a {report_a.kind.value} and a {report_b.kind.value} estimate'
        )

    label = label or f'{report_a.label}-{report_b.label}'
    flags = []
    draws = None
    interval = None

    joint = report_a.draws is not None and report_b.draws is not None \
        and len(report_a.draws) == len(report_b.draws) \
        and report_a.seeds.get('bootstrap') == report_b.seeds.get('bootstrap')
    if joint:
        draws = report_a.draws - report_b.draws
        se = draws_se(draws)
        interval = percentile_interval(draws)
    else:
        se = float(np.hypot(report_a.se, report_b.se))
        flags.append('independent')

    return EstimateReport(
        label,
        report_a.kind,
        report_a.point - report_b.point,
        se=se,
        draws=draws,
        member_count=report_a.member_count + report_b.member_count,
        positivity=_joint_verdict(report_a.positivity, report_b.positivity),
        seeds={**report_b.seeds, **report_a.seeds},
        hyperparameters={**report_b.hyperparameters, **report_a.hyperparameters},
        interval=interval,
        flags=flags,
        dropped_count=report_a.dropped_count + report_b.dropped_count,
    )


def naive_difference(y: np.ndarray,
                     z: np.ndarray,
                     *,
                     B: int = None,        # pylint: disable=invalid-name
                     seed: int = 0,
                     resample_unit: ResampleUnit = ResampleUnit.UNIT,
                     partition: ClusterPartition = None,
                     threads: int = None,
                     ) -> EstimateReport:
    """
    Treated mean minus control mean, ignoring interference.
    """
    z = np.asarray(z).astype(bool)
    ones = np.ones(len(z))
    options = {
        'kind': EstimatorKind.HAJEK,
        'B': B,
        'seed': seed,
        'resample_unit': resample_unit,
        'partition': partition,
        'threads': threads,
    }

    treated = estimate_condition(y, z, ones, label='treated', **options)
    control = estimate_condition(y, ~z, ones, label='control', **options)

    return gate_difference(treated, control, 'naive')
