from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import FitException
from motif_exposure.estimation.gate import gate_difference
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.motif import ReferenceRepresentations
from motif_exposure.model.tree import ExposureTree


GATE_DEGENERATE = 'gate degenerate'


def tree_gate_effect(tree: ExposureTree, refs: ReferenceRepresentations) -> EstimateReport:
    """
    Global average treatment effect from the leaves holding the all-treated
    and all-control reference representations.

    When both references fall in the same leaf the effect is 0, flagged
    "gate degenerate".
    :param tree: A fitted tree with leaf estimates
    :param refs: Reference representations of the tree's schema
    :return: The gate report with a joint bootstrap SE
    """
    if refs.schema != tree.schema:
        raise FitException('Reference representations and tree use different schemas')

    treated = tree.leaf(tree.assign_leaf(refs.r1))
    control = tree.leaf(tree.assign_leaf(refs.r0))
    if treated.estimate is None or control.estimate is None:
        raise FitException('Tree leaves carry no estimates')

    if treated is control:
        LOGGER.warning('Both reference representations fall in leaf %s', treated.label)

        return EstimateReport(
            'tree-gate',
            treated.estimate.kind,
            0.0,
            member_count=treated.estimate.member_count,
            positivity=treated.estimate.positivity,
            seeds=dict(treated.estimate.seeds),
            flags=[GATE_DEGENERATE],
        )

    report = gate_difference(treated.estimate, control.estimate, 'tree-gate')
    report.hyperparameters['leaves'] = [treated.label, control.label]

    return report
