import argparse
from pathlib import Path

from motif_exposure.etc.consts import LOGGER
from motif_exposure.model.manifest import RunManifest
from motif_exposure.synth.config import PRESETS, HarnessConfig, load_harness_config, \
    override_config, preset_config
from motif_exposure.synth.harness import matched_sweep_frame, replication_seeds, run_harness, \
    write_summary_csv
from .common import prepare_out_dir, seed_list, write_json, ESTIMATES_FILE, SUMMARY_FILE, \
    SWEEP_FILE


def harness_overrides(args: argparse.Namespace) -> dict:
    """
    Command-line flags that override the preset or configuration file.
    """
    overrides = {}
    if args.network is not None:
        overrides['network'] = {'kind': 'edge-list', 'path': str(args.network)}
        if args.attrs is not None:
            overrides['network']['attrs'] = str(args.attrs)
    for key in ('replicates', 'bootstrap'):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.seeds is not None:
        overrides['seeds'] = args.seeds

    return overrides


def resolve_config(args: argparse.Namespace) -> HarnessConfig:
    overrides = harness_overrides(args)
    if args.config is None:
        return preset_config(args.preset, overrides)

    config = load_harness_config(args.config, args.preset if args.preset_given else None)
    if not overrides:
        return config

    return override_config(config, overrides)


def cmd_simulate(args: argparse.Namespace):
    """
    Run synthetic replications with a known ground truth.
    """
    out_dir = prepare_out_dir(args.out_dir)
    config = resolve_config(args)
    seeds = config.seeds

    manifest = RunManifest(
        'simulate',
        config.snapshot(),
        {str(seed): replication_seeds(seed) for seed in seeds},
    )
    if config.network.kind == 'edge-list':
        manifest.add_input('network', config.network.path)
        manifest.add_input('attrs', config.network.attrs)

    with manifest.timed('replications'):
        bundles = run_harness(config, seeds, threads=args.threads)

    write_summary_csv(bundles, out_dir / SUMMARY_FILE)
    write_json(
        {
            'runId': manifest.run_id,
            'preset': args.preset,
            'replications': [bundle.to_dict() for bundle in bundles],
        },
        out_dir / ESTIMATES_FILE,
    )
    manifest.artifacts = [SUMMARY_FILE, ESTIMATES_FILE]

    sweeps = matched_sweep_frame(bundles)
    if not sweeps.empty:
        sweeps.to_csv(out_dir / SWEEP_FILE, index=False, lineterminator='\n')
        manifest.artifacts.append(SWEEP_FILE)

    manifest.write(out_dir)
    LOGGER.info('Simulation %s finished: %d replications', manifest.run_id, len(bundles))


class _PresetAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, 'preset_given', True)


def register(subparsers: argparse._SubParsersAction):      # pylint: disable=protected-access
    parser = subparsers.add_parser(
        'simulate',
        help='Run synthetic replications with a known ground truth',
        description='Generate a network and a potential outcome model, run every '
                    'estimator and compare it with the exact effect.',
    )
    parser.add_argument('--preset', choices=sorted(PRESETS), default='ws-bernoulli',
                        action=_PresetAction, help='Named harness configuration')
    parser.add_argument('--config', type=Path, default=None,
                        help='Harness configuration in JSON or TOML')
    parser.add_argument('--network', type=Path, default=None,
                        help='Edge list replacing the generated network')
    parser.add_argument('--attrs', type=Path, default=None, help='CSV of node attributes')
    parser.add_argument('--seeds', type=seed_list, default=None,
                        help='Number of replications, or a comma separated list of seeds')
    parser.add_argument('--replicates', type=int, default=None,
                        help='Assignment replicates for exposure probabilities')
    parser.add_argument('--bootstrap', type=int, default=None,
                        help='Bootstrap resamples for standard errors')
    parser.add_argument('--threads', type=int, default=None, help='Upper bound on worker threads')
    parser.add_argument('--out-dir', type=Path, required=True, help='Directory of the artifacts')
    parser.set_defaults(handler=cmd_simulate, preset_given=False)
