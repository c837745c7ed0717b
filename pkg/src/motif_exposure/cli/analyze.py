import argparse
from pathlib import Path

import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import AnalysisMode, Assumption, EstimatorKind, MetricKind, ScoreKind
from motif_exposure.etc.errors import ArgumentException, PositivityException, SelectionException
from motif_exposure.estimation.fractional import fractional_q_conditions, fractional_q_report, \
    TREATED_ABOVE, CONTROL_BELOW
from motif_exposure.estimation.gate import naive_difference
from motif_exposure.estimation.inference import exact_p_value
from motif_exposure.exposure.probability import estimate_membership_prob, write_probability_table
from motif_exposure.exposure.replicates import ReplicateCache, build_replicate_cache
from motif_exposure.knn.metric import fit_metric
from motif_exposure.knn.sweep import default_k_grid, knn_condition, select_estimate, sweep_k, \
    write_sweep_csv
from motif_exposure.model.assignment import AssignmentVector, ClusterPartition, RandomizationDesign
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.exposure import ExposureCondition
from motif_exposure.model.graph import Graph
from motif_exposure.model.manifest import RunManifest
from motif_exposure.model.motif import RepresentationMatrix, fractional_q_schema
from motif_exposure.model.tree import TreeHyperparams
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.representation import build_representation_matrix, \
    reference_representations, write_representations
from motif_exposure.tree.effect import tree_gate_effect
from motif_exposure.tree.fit import fit_tree
from motif_exposure.tree.render import write_tree_json, write_tree_dot
from .common import add_design_arguments, add_run_arguments, analysis_seeds, build_design, \
    config_snapshot, load_observed, prepare_out_dir, resample_options, resolve_schema, \
    write_json, ESTIMATES_FILE, PROBABILITIES_FILE, REPRESENTATIONS_FILE, SWEEP_FILE, \
    TREE_DOT_FILE, TREE_JSON_FILE


def float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f'expected a comma separated list of numbers: {text}'
        ) from e


class AnalysisContext:
    """
    Everything the mode-specific analyses share within one analyze run.
    """
    def __init__(self,
                 args: argparse.Namespace,
                 g: Graph,
                 assignment: AssignmentVector,
                 y: np.ndarray,
                 design: RandomizationDesign,
                 partition: ClusterPartition | None,
                 census: MotifCensus,
                 reps: RepresentationMatrix,
                 cache: ReplicateCache,
                 seeds: dict[str, int],
                 ):
        self.args = args
        self.g = g
        self.assignment = assignment
        self.y = y
        self.design = design
        self.partition = partition
        self.census = census
        self.reps = reps
        self.cache = cache
        self.seeds = seeds
        self.options = resample_options(args, partition)
        self.estimator = EstimatorKind(args.estimator)
        self.positivity = {'epsilon': args.epsilon, 'delta': args.delta}

    @property
    def out_dir(self) -> Path:
        return self.args.out_dir

    @property
    def schema(self):
        return self.reps.schema


class AnalysisOutcome:
    def __init__(self,
                 payload: dict,
                 conditions: list[ExposureCondition],
                 primary: EstimateReport | None,
                 *,
                 contrast: tuple[ExposureCondition, ExposureCondition] = None,
                 artifacts: list[str] = None,
                 failure: PositivityException = None,
                 ):
        """
        Result of one analysis mode.
        :param payload: Mode-specific content of the estimates file
        :param conditions: Conditions whose probabilities go to the probability table
        :param primary: The headline gate estimate
        :param contrast: Two disjoint conditions for randomization inference
        :param artifacts: Extra files the mode wrote
        :param failure: A positivity failure raised once every artifact is written
        """
        self.payload = payload
        self.conditions = conditions
        self.primary = primary
        self.contrast = contrast
        self.artifacts = artifacts or []
        self.failure = failure


def run_tree(ctx: AnalysisContext) -> AnalysisOutcome:
    args = ctx.args
    params = TreeHyperparams(
        ScoreKind(args.score),
        args.gamma,
        args.kappa,
        max_depth=args.max_depth,
        kind=ctx.estimator,
        **ctx.positivity,
    )
    tree = fit_tree(ctx.reps, ctx.y, ctx.cache, params, ctx.seeds['split'],
                    bootstrap_seed=ctx.seeds['bootstrap'], **ctx.options)
    write_tree_json(tree, ctx.out_dir / TREE_JSON_FILE)
    write_tree_dot(tree, ctx.out_dir / TREE_DOT_FILE)

    refs = reference_representations(ctx.schema)
    gate = tree_gate_effect(tree, refs)
    treated = tree.leaf(tree.assign_leaf(refs.r1))
    control = tree.leaf(tree.assign_leaf(refs.r0))

    return AnalysisOutcome(
        {
            'gate': gate.to_dict(),
            'leaves': [leaf.estimate.to_dict() for leaf in tree.leaves() if leaf.estimate],
            'tree': tree.params.to_dict(),
        },
        [leaf.box for leaf in tree.leaves()],
        gate,
        contrast=(treated.box, control.box) if treated is not control else None,
        artifacts=[TREE_JSON_FILE, TREE_DOT_FILE],
    )


def run_knn(ctx: AnalysisContext) -> AnalysisOutcome:
    args = ctx.args
    n = ctx.g.node_count
    metric = fit_metric(ctx.reps, ctx.y, MetricKind(args.metric))
    k_grid = sorted({min(n, max(1, int(round(percent * n / 100.0)))) for percent in args.k_grid}) \
        if args.k_grid else default_k_grid(n)

    rows = sweep_k(ctx.reps, ctx.cache, ctx.y, metric, k_grid, kind=ctx.estimator,
                   seed=ctx.seeds['bootstrap'], **ctx.positivity, **ctx.options)
    write_sweep_csv(rows, ctx.out_dir / SWEEP_FILE)

    payload = {
        'metric': metric.to_dict(),
        'assumption': args.assume,
        'sweep': [row.to_dict() for row in rows],
    }
    refs = reference_representations(ctx.schema)

    try:
        selected = select_estimate(rows, Assumption(args.assume), args.se_cap)
    except SelectionException as e:
        payload['selected'] = None
        return AnalysisOutcome(payload, [], None, artifacts=[SWEEP_FILE], failure=e)

    payload['selected'] = {'K': selected.K, 'gate': selected.gate.to_dict()}
    treated = knn_condition(ctx.reps, metric, refs.r1, selected.K, 'knn1')
    control = knn_condition(ctx.reps, metric, refs.r0, selected.K, 'knn0')

    return AnalysisOutcome(payload, [treated, control], selected.gate,
                           contrast=(treated, control), artifacts=[SWEEP_FILE])


def run_fracq(ctx: AnalysisContext) -> AnalysisOutcome:
    args = ctx.args
    report = fractional_q_report(ctx.g, ctx.y, ctx.reps, ctx.cache, args.q,
                                 kind=ctx.estimator, seed=ctx.seeds['bootstrap'],
                                 **ctx.positivity, **ctx.options)
    conditions = fractional_q_conditions(ctx.g, args.q)

    return AnalysisOutcome(
        report.to_dict(),
        list(conditions.values()),
        report.gate,
        contrast=(conditions[TREATED_ABOVE], conditions[CONTROL_BELOW]),
    )


ANALYSES = {
    AnalysisMode.TREE: run_tree,
    AnalysisMode.KNN: run_knn,
    AnalysisMode.FRACQ: run_fracq,
}


def run_inference(ctx: AnalysisContext, outcome: AnalysisOutcome) -> dict | None:
    if outcome.contrast is None:
        LOGGER.warning('No pair of distinct conditions to test, skipping the p-value')
        return None

    condition_a, condition_b = outcome.contrast
    result = exact_p_value(
        ctx.g,
        ctx.design,
        ctx.assignment.z,
        ctx.y,
        condition_a,
        condition_b,
        ctx.args.hop,
        ctx.args.inference_draws,
        ctx.seeds['inference'],
        reps=ctx.reps,
        probs_a=ctx.cache.probabilities(condition_a, ctx.args.threads),
        probs_b=ctx.cache.probabilities(condition_b, ctx.args.threads),
        census=ctx.census,
        threads=ctx.args.threads,
    )

    return result.to_dict()


def _positivity_failure(report: EstimateReport) -> PositivityException | None:
    verdict = report.positivity
    if verdict is None or verdict.ok:
        return None

    return PositivityException(
        f'{report.label} fails positivity: {verdict.violating_fraction:.4f} of units at or '
        f'below epsilon={verdict.epsilon}, tolerance delta={verdict.delta}'
    )


def cmd_analyze(args: argparse.Namespace):
    """
    Estimate exposure effects from an observed experiment.
    """
    mode = AnalysisMode(args.mode)
    if args.bootstrap < 2:
        raise ArgumentException(f'Need at least two bootstrap resamples, got {args.bootstrap}')

    out_dir = prepare_out_dir(args.out_dir)
    seeds = analysis_seeds(args.seed)
    manifest = RunManifest('analyze', config_snapshot(args), seeds)

    with manifest.timed('load'):
        g, assignment, y = load_observed(args, manifest)
        schema_text = args.schema or (','.join(fractional_q_schema().codes)
                                      if mode == AnalysisMode.FRACQ else None)
        schema = resolve_schema(schema_text, g)
        design, partition = build_design(args, g, seeds)

    with manifest.timed('representations'):
        census = MotifCensus(g, schema)
        reps = build_representation_matrix(g, assignment, schema, seeds['uniforms'], census=census)
        write_representations(g, reps, out_dir / REPRESENTATIONS_FILE)

    with manifest.timed('replicates'):
        cache = build_replicate_cache(g, design, schema, args.replicates, seeds['replicates'],
                                      census=census, threads=args.threads)

    try:
        ctx = AnalysisContext(args, g, assignment, y, design, partition, census, reps, cache, seeds)

        with manifest.timed(mode.value):
            outcome = ANALYSES[mode](ctx)
            naive = naive_difference(y, assignment.z, seed=seeds['bootstrap'], **ctx.options)

        artifacts = [REPRESENTATIONS_FILE, ESTIMATES_FILE, *outcome.artifacts]
        if outcome.conditions:
            table = estimate_membership_prob(g, design, schema, outcome.conditions,
                                             args.replicates, seeds['replicates'],
                                             cache=cache, threads=args.threads)
            write_probability_table(g, table, out_dir / PROBABILITIES_FILE)
            artifacts.append(PROBABILITIES_FILE)

        inference = None
        if args.p_value:
            with manifest.timed('inference'):
                inference = run_inference(ctx, outcome)
    finally:
        cache.close()

    manifest.artifacts = artifacts
    write_json(
        {
            'runId': manifest.run_id,
            'mode': mode.value,
            'schema': schema.to_dict(),
            'design': design.to_dict(),
            'naive': naive.to_dict(),
            'inference': inference,
            **outcome.payload,
        },
        out_dir / ESTIMATES_FILE,
    )
    manifest.write(out_dir)

    failure = outcome.failure or (_positivity_failure(outcome.primary) if outcome.primary else None)
    if failure is not None:
        raise failure

    LOGGER.info('Analysis %s finished, %s = %.4f (se %.4f)', manifest.run_id,
                outcome.primary.label, outcome.primary.point, outcome.primary.se)


def register(subparsers: argparse._SubParsersAction):      # pylint: disable=protected-access
    parser = subparsers.add_parser(
        'analyze',
        help='Estimate exposure effects from an observed experiment',
        description='Build causal network motif representations and estimate '
                    'exposure effects with an exposure tree, a nearest-neighbor sweep '
                    'or the fractional q baseline.',
    )

    inputs = parser.add_argument_group('inputs')
    inputs.add_argument('--graph', type=Path, required=True, help='Edge list, one "u v" per line')
    inputs.add_argument('--attrs', type=Path, default=None, help='CSV of node attributes')
    inputs.add_argument('--assignment', type=Path, required=True, help='CSV with node_id,z')
    inputs.add_argument('--outcomes', type=Path, required=True, help='CSV with node_id,y')
    inputs.add_argument('--schema', default=None, help='Comma separated dimension codes')

    add_design_arguments(parser)
    add_run_arguments(parser)

    parser.add_argument('--mode', choices=[mode.value for mode in AnalysisMode], required=True,
                        help='Analysis to run')

    tree = parser.add_argument_group('tree')
    tree.add_argument('--score', choices=[kind.value for kind in ScoreKind],
                      default=ScoreKind.TSTAT.value, help='Split score')
    tree.add_argument('--gamma', type=float, default=1.96, help='Minimum split score')
    tree.add_argument('--kappa', type=int, default=100, help='Minimum training units per child')
    tree.add_argument('--max-depth', type=int, default=None, help='Optional depth cap')

    knn = parser.add_argument_group('nearest neighbors')
    knn.add_argument('--metric', choices=[kind.value for kind in MetricKind],
                     default=MetricKind.IDENTICAL.value, help='Distance metric')
    knn.add_argument('--k-grid', type=float_list, default=None,
                     help='K values as percentages of N, e.g. 1,2,5,10,20,50')
    knn.add_argument('--assume', choices=[kind.value for kind in Assumption],
                     default=Assumption.NON_NEGATIVE.value, help='Direction of interference')
    knn.add_argument('--se-cap', type=float, default=None, help='Largest accepted gate SE')

    fracq = parser.add_argument_group('fractional q')
    fracq.add_argument('--q', type=float, default=0.5, help='Treated-neighbor fraction threshold')

    inference = parser.add_argument_group('inference')
    inference.add_argument('--p-value', action='store_true',
                           help='Also test the sharp null between the two gate conditions')
    inference.add_argument('--hop', type=int, default=1, help='Interference hop count')
    inference.add_argument('--inference-draws', type=int, default=500,
                           help='Re-randomizations of the focal ego networks')

    parser.set_defaults(handler=cmd_analyze)
