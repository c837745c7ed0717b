import argparse
import json
from pathlib import Path

import numpy as np

from motif_exposure.etc.consts import LOGGER, ANALYSIS_CONFIG
from motif_exposure.etc.enums import DesignKind, EstimatorKind, ResampleUnit
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.etc.utils import derive_seed
from motif_exposure.graph.io import load_edge_list, align_to_graph
from motif_exposure.model.assignment import RandomizationDesign, AssignmentVector, ClusterPartition
from motif_exposure.model.graph import Graph
from motif_exposure.model.manifest import RunManifest
from motif_exposure.model.motif import MotifSchema, default_schema
from motif_exposure.randomization.io import read_assignment, read_partition
from motif_exposure.randomization.partition import recursive_kl_partition


ANALYSIS_SEED_LABELS = ('partition', 'uniforms', 'replicates', 'bootstrap', 'split', 'inference')

ESTIMATES_FILE = 'estimates.json'
REPRESENTATIONS_FILE = 'representations.csv'
PROBABILITIES_FILE = 'probs.csv'
TREE_JSON_FILE = 'tree.json'
TREE_DOT_FILE = 'tree.dot'
SWEEP_FILE = 'sweep.csv'
SUMMARY_FILE = 'summary.csv'
REPORT_FILE = 'report.md'

SNAPSHOT_EXCLUDED = {'handler', 'out_dir', 'threads', 'log_level'}


def int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f'expected a comma separated list of integers: {text}'
        ) from e


def seed_list(text: str) -> list[int]:
    """
    Either a count n, meaning seeds 0..n-1, or a comma separated list.
    """
    if ',' not in text:
        try:
            return list(range(int(text)))
        except ValueError as e:
            raise argparse.ArgumentTypeError(f'expected a seed count or list: {text}') from e

    return int_list(text)


def add_design_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('design')
    group.add_argument('--design', choices=[kind.value for kind in DesignKind],
                       default=DesignKind.BERNOULLI.value, help='Randomization design')
    group.add_argument('--p', type=float, default=ANALYSIS_CONFIG.treatment_probability,
                       help='Treatment probability of units or clusters')
    group.add_argument('--levels', type=int, default=9,
                       help='Bisection levels of the cluster partition, 2**levels clusters')
    group.add_argument('--partition', type=Path, default=None,
                       help='CSV with node_id,cluster, replaces the generated partition')


def add_run_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('run')
    group.add_argument('--replicates', type=int, default=ANALYSIS_CONFIG.replicates,
                       help='Assignment replicates for exposure probabilities')
    group.add_argument('--bootstrap', type=int, default=ANALYSIS_CONFIG.bootstrap_replicates,
                       help='Bootstrap resamples for standard errors')
    group.add_argument('--epsilon', type=float, default=ANALYSIS_CONFIG.epsilon,
                       help='Positivity probability threshold')
    group.add_argument('--delta', type=float, default=ANALYSIS_CONFIG.delta,
                       help='Tolerated share of units violating positivity')
    group.add_argument('--estimator', choices=[kind.value for kind in EstimatorKind],
                       default=EstimatorKind.HAJEK.value, help='Weighted mean estimator')
    group.add_argument('--seed', type=int, default=0, help='Master seed of the run')
    group.add_argument('--threads', type=int, default=ANALYSIS_CONFIG.threads,
                       help='Upper bound on worker threads')
    group.add_argument('--out-dir', type=Path, required=True, help='Directory of the artifacts')


def analysis_seeds(master_seed: int) -> dict[str, int]:
    seeds = {label: derive_seed(master_seed, 'analysis', label) for label in ANALYSIS_SEED_LABELS}
    seeds['master'] = master_seed

    return seeds


def prepare_out_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)

    return path


def resolve_schema(text: str | None, g: Graph) -> MotifSchema:
    """
    The schema named on the command line, or the default schema without the
    covariate dimensions the graph has no column for.
    """
    if text:
        return MotifSchema.parse(text)

    schema = default_schema()
    missing = [dim.code for dim in schema.dims
               if dim.attr_column is not None and dim.attr_column not in g.attrs.columns]
    if missing:
        LOGGER.warning('No attribute column for %s, dropping them from the default schema',
                       ', '.join(missing))
        schema = schema.restricted([code for code in schema.codes if code not in missing])

    return schema


def load_observed(args: argparse.Namespace,
                  manifest: RunManifest,
                  ) -> tuple[Graph, AssignmentVector, np.ndarray]:
    """
    Load the graph, the observed assignment and the outcomes, all aligned to
    the graph's node order.
    """
    g = load_edge_list(args.graph, args.attrs)
    assignment = read_assignment(g, args.assignment)
    y = align_to_graph(g, args.outcomes, 'y').astype(np.float64)
    if not np.isfinite(y).all():
        raise ArgumentException('Outcome column y must hold finite numbers')

    for role in ('graph', 'attrs', 'assignment', 'outcomes'):
        manifest.add_input(role, getattr(args, role))

    LOGGER.info('Loaded %s with %d treated units', g, int(assignment.z.sum()))

    return g, assignment, y


def build_design(args: argparse.Namespace,
                 g: Graph,
                 seeds: dict[str, int],
                 ) -> tuple[RandomizationDesign, ClusterPartition | None]:
    if DesignKind(args.design) == DesignKind.BERNOULLI:
        return RandomizationDesign.bernoulli(args.p), None

    if args.partition is not None:
        partition = read_partition(g, args.partition)
    else:
        partition = recursive_kl_partition(g, args.levels, seeds['partition'])

    return RandomizationDesign.cluster(partition, args.p), partition


def resample_options(args: argparse.Namespace, partition: ClusterPartition | None) -> dict:
    return {
        'B': args.bootstrap,
        'resample_unit': ResampleUnit.CLUSTER if partition is not None else ResampleUnit.UNIT,
        'partition': partition,
        'threads': args.threads,
    }


def config_snapshot(args: argparse.Namespace) -> dict:
    """
    Every parsed option that can change an artifact, as JSON-ready values.
    """
    snapshot = {}
    for key, value in sorted(vars(args).items()):
        if key in SNAPSHOT_EXCLUDED:
            continue
        snapshot[key] = str(value) if isinstance(value, Path) else value

    return snapshot


def write_json(payload: dict, path: Path):
    with open(path, 'w', encoding='utf-8') as file:
        json.dump(payload, file, indent=2, sort_keys=True, allow_nan=True)
