from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import DesignKind, ResampleUnit
from motif_exposure.etc.errors import EstimationException, FitException, PositivityException
from motif_exposure.etc.utils import derive_seed, parallel_map
from motif_exposure.estimation.fractional import fractional_q_report
from motif_exposure.estimation.gate import naive_difference
from motif_exposure.exposure.replicates import build_replicate_cache
from motif_exposure.graph.io import load_edge_list
from motif_exposure.knn.metric import fit_metric
from motif_exposure.knn.sweep import default_k_grid, select_estimate, sweep_k
from motif_exposure.model.assignment import RandomizationDesign
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import DEFAULT_ATTR_COLUMN, fractional_q_schema
from motif_exposure.model.synth import ReplicationBundle
from motif_exposure.model.tree import TreeHyperparams
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.representation import build_representation_matrix, \
    reference_representations
from motif_exposure.randomization.design import assign
from motif_exposure.randomization.partition import recursive_kl_partition
from motif_exposure.tree.effect import tree_gate_effect
from motif_exposure.tree.fit import fit_tree
from .config import HarnessConfig, NetworkSpec
from .outcomes import attach_outcome_model, generate_watts_strogatz, ground_truth, realize_outcomes


SEED_LABELS = ('network', 'outcome', 'partition', 'assignment', 'uniforms',
               'replicates', 'bootstrap', 'split')

SUMMARY_COLUMNS = ['seed', 'method', 'estimate', 'se', 'oracle_tau', 'bias']

MATCHED_SWEEP_COLUMNS = ['seed', 'K', 'K_over_N', 'tau_knn', 'se_knn', 'passes_knn',
                         'tau_fracq', 'se_fracq', 'passes_fracq', 'oracle_tau']


def replication_seeds(seed: int) -> dict[str, int]:
    return {label: derive_seed(seed, 'synth', label) for label in SEED_LABELS}


def build_network(spec: NetworkSpec, seed: int) -> Graph:
    if spec.kind == 'edge-list':
        return load_edge_list(spec.path, spec.attrs)

    return generate_watts_strogatz(spec.n, spec.k, spec.beta, seed)


def _binary_covariate(g: Graph) -> np.ndarray | None:
    if DEFAULT_ATTR_COLUMN not in g.attrs.columns:
        return None

    values = g.attribute(DEFAULT_ATTR_COLUMN)
    if not np.isin(values, (0.0, 1.0)).all():
        LOGGER.warning('Attribute column %s is not binary, drawing a fresh covariate',
                       DEFAULT_ATTR_COLUMN)
        return None

    return values.astype(np.int8)


def _attempt(method: str, fn: Callable[[], EstimateReport | None]) -> EstimateReport | None:
    try:
        return fn()
    except (EstimationException, FitException, PositivityException) as e:
        LOGGER.warning('No %s estimate in this replication: %s', method, e.message)
        return None


def run_replication(config: HarnessConfig,
                    seed: int,
                    network: Graph = None,
                    threads: int = None,
                    ) -> ReplicationBundle:
    """
    One end-to-end synthetic experiment.

    Draws the network and the outcome model, assigns treatment under the
    configured design, realizes noisy outcomes, builds representations and
    replicate exposure probabilities, then runs the naive difference, the
    fractional q baseline, the nearest-neighbor sweep and the exposure tree.
    Every analysis shares one bootstrap seed.
    :param config: The harness configuration
    :param seed: Master seed of the replication
    :param network: A graph to use instead of building one from the configuration
    :param threads: Upper bound on worker threads
    :return: Estimates, ground truth and artifacts of the replication
    """
    seeds = replication_seeds(seed)
    LOGGER.info('Replication %d: seeds %s', seed, seeds)

    g = network if network is not None else build_network(config.network, seeds['network'])
    model = attach_outcome_model(g, config.noise_sigma, seeds['outcome'], _binary_covariate(g))
    attrs = g.attrs.copy()
    attrs[DEFAULT_ATTR_COLUMN] = model.X.astype(np.float64)
    g = g.with_attributes(attrs)
    truth = ground_truth(model)

    partition = None
    if config.design.kind == DesignKind.CLUSTER:
        partition = recursive_kl_partition(g, config.design.levels, seeds['partition'])
        design = RandomizationDesign.cluster(partition, config.design.p)
    else:
        design = RandomizationDesign.bernoulli(config.design.p)

    z = assign(design, g.node_count, seeds['assignment'])
    y = realize_outcomes(model, z)

    schema = config.schema
    census = MotifCensus(g, schema)
    reps = build_representation_matrix(g, z, schema, seeds['uniforms'], census=census)
    cache = build_replicate_cache(g, design, schema, config.replicates, seeds['replicates'],
                                  census=census, threads=threads)

    options = {
        'B': config.bootstrap,
        'resample_unit': ResampleUnit.CLUSTER if partition is not None else ResampleUnit.UNIT,
        'partition': partition,
        'threads': threads,
    }
    positivity = {'epsilon': config.epsilon, 'delta': config.delta}
    estimates = {}

    estimates['naive'] = naive_difference(y, z.z, seed=seeds['bootstrap'], **options)

    fracq_codes = fractional_q_schema().codes
    fracq_reps = reps.restricted(fracq_codes)
    fracq_cache = cache.restricted([schema.index(code) for code in fracq_codes],
                                   fracq_reps.schema)
    estimates['fracq'] = _attempt('fractional q', lambda: fractional_q_report(
        g, y, fracq_reps, fracq_cache, config.q,
        kind=config.estimator, seed=seeds['bootstrap'], **positivity, **options,
    ).gate)

    sweep = []
    fracq_sweep = []
    if config.knn.enabled:
        sweep_options = {'kind': config.estimator, 'seed': seeds['bootstrap'], **positivity,
                         **options}
        k_grid = default_k_grid(g.node_count, tuple(config.knn.k_grid))
        metric = fit_metric(reps, y, config.knn.metric)
        sweep = sweep_k(reps, cache, y, metric, k_grid, **sweep_options)
        fracq_metric = fit_metric(fracq_reps, y, config.knn.metric)
        fracq_sweep = sweep_k(fracq_reps, fracq_cache, y, fracq_metric, k_grid,
                              prefix='fracq', **sweep_options)
        estimates['knn'] = _attempt('nearest-neighbor', lambda: select_estimate(
            sweep, config.knn.assumption).gate)
        smallest = next((row for row in sweep if row.passes), None)
        estimates['knn-smallest-k'] = smallest.gate if smallest is not None else None
        matched = next((row for row in fracq_sweep
                        if smallest is not None and row.K == smallest.K), None)
        estimates['fracq-matched-k'] = matched.gate if matched is not None else None

    tree = None
    if config.tree.enabled:
        params = TreeHyperparams(config.tree.score, config.tree.gamma, config.tree.kappa,
                                 max_depth=config.tree.max_depth, kind=config.estimator,
                                 **positivity)

        def tree_estimate() -> EstimateReport:
            nonlocal tree
            tree = fit_tree(reps, y, cache, params, seeds['split'],
                            bootstrap_seed=seeds['bootstrap'], **options)
            return tree_gate_effect(tree, reference_representations(schema))

        estimates['tree'] = _attempt('tree', tree_estimate)

    fracq_cache.close()
    cache.close()

    estimates = {method: report for method, report in estimates.items() if report is not None}
    for method, report in estimates.items():
        LOGGER.info('Replication %d: %s = %.4f (se %.4f), oracle tau = %.4f',
                    seed, method, report.point, report.se, truth.tau)

    return ReplicationBundle(seed, truth, estimates, seeds=seeds, sweep=sweep,
                             fracq_sweep=fracq_sweep, tree=tree)


def run_harness(config: HarnessConfig,
                seeds: list[int] = None,
                network: Graph = None,
                threads: int = None,
                ) -> list[ReplicationBundle]:
    """
    Run one replication per seed. An edge-list network is loaded once and shared.
    """
    seeds = list(seeds if seeds is not None else config.seeds)
    if network is None and config.network.kind == 'edge-list':
        network = load_edge_list(config.network.path, config.network.attrs)

    LOGGER.info('Running %d replications', len(seeds))

    inner_threads = 1 if len(seeds) > 1 else threads

    return parallel_map(
        lambda seed: run_replication(config, seed, network, threads=inner_threads),
        seeds,
        threads,
    )


def summary_frame(bundles: list[ReplicationBundle]) -> pd.DataFrame:
    """
    One row per replication and method with the estimate, the oracle effect and the bias.
    """
    rows = [row for bundle in bundles for row in bundle.summary_rows()]

    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_summary_csv(bundles: list[ReplicationBundle], path: str | Path):
    summary_frame(bundles).to_csv(path, index=False, lineterminator='\n')


def matched_sweep_frame(bundles: list[ReplicationBundle]) -> pd.DataFrame:
    """
    One row per replication and K with the nearest-neighbor and the fractional q
    gate estimates at that K.
    """
    rows = [row for bundle in bundles for row in bundle.matched_sweep_rows()]

    return pd.DataFrame(rows, columns=MATCHED_SWEEP_COLUMNS)
