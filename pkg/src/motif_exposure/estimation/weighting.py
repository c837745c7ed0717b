import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import EstimatorKind
from motif_exposure.etc.errors import EstimationException, ArgumentException
from motif_exposure.model.estimate import EstimateReport


def weighted_point(y: np.ndarray,
                   member: np.ndarray,
                   probs: np.ndarray,
                   kind: EstimatorKind,
                   ) -> float:
    """
    Inverse-probability weighted mean of the members of a condition.

    Horvitz-Thompson divides the weighted sum by the number of units,
    Hajek by the sum of the weights.
    """
    member = np.asarray(member, dtype=bool)
    if not member.any():
        raise EstimationException('Condition has no member units')

    member_probs = probs[member]
    if (member_probs <= 0).any():
        offender = int(np.flatnonzero(member)[np.argmax(member_probs <= 0)])
        raise EstimationException(
            f'Unit {offender} is a member with exposure probability 0 (positivity violation)'
        )

    weights = 1.0 / member_probs
    total = float(np.dot(weights, y[member]))

    if kind == EstimatorKind.HT:
        return total / len(y)

    return total / float(weights.sum())


def weighted_mean(y: np.ndarray,
                  member: np.ndarray,
                  probs: np.ndarray,
                  kind: EstimatorKind = EstimatorKind.HAJEK,
                  label: str = 'mu',
                  ) -> EstimateReport:
    """
    Horvitz-Thompson or Hajek estimate of the average potential outcome of a condition.
    :param y: Outcome vector
    :param member: Membership indicator of the condition
    :param probs: Per-unit exposure probabilities of the condition
    :param kind: Estimator kind
    :param label: Estimand label
    :return: Report with the point estimate only
    """
    y = np.asarray(y, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if not len(y) == len(member) == len(probs):
        raise ArgumentException('Outcomes, membership and probabilities must align')

    point = weighted_point(y, member, probs, kind)

    return EstimateReport(label, kind, point, member_count=int(np.sum(member)))


def drop_unreachable(member: np.ndarray, probs: np.ndarray, label: str) -> tuple[np.ndarray, int]:
    """
    Drop members whose exposure probability is 0, logging how many were dropped.
    :return: The reduced membership and the dropped count
    """
    unreachable = member & (probs <= 0)
    dropped = int(unreachable.sum())
    if dropped:
        LOGGER.warning(
            'Dropped %d members of %s with exposure probability 0',
            dropped,
            label,
        )

    return member & ~unreachable, dropped
