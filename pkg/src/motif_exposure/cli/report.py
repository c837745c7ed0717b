import argparse
import json
from pathlib import Path

import numpy as np
import pandas as pd
from tabulate import tabulate

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import ArtifactNotFoundException
from motif_exposure.knn.sweep import read_sweep_csv
from motif_exposure.model.manifest import RunManifest
from motif_exposure.tree.render import read_tree_json, render_ascii, leaf_table
from .common import ESTIMATES_FILE, REPORT_FILE, SUMMARY_FILE, SWEEP_FILE, TREE_JSON_FILE


def markdown_table(frame: pd.DataFrame, floatfmt: str = '.4f') -> str:
    return tabulate(frame, headers='keys', tablefmt='github', floatfmt=floatfmt, showindex=False,
                    missingval='n/a')


def _artifact(run_dir: Path, name: str) -> Path:
    path = run_dir / name
    if not path.exists():
        raise ArtifactNotFoundException(f'Expected artifact {name} at {path}')

    return path


def _estimate_row(name: str, report: dict | None) -> dict:
    if report is None:
        return {'estimate': name, 'point': None, 'se': None, 'interval': None,
                'members': None, 'positivity': None}

    positivity = report.get('positivity')
    verdict = None
    if positivity is not None:
        verdict = '{} ({:.4f} violating)'.format(
            'ok' if positivity['ok'] else 'FAIL', positivity['violating_fraction'],
        )
    interval = report.get('interval')

    return {
        'estimate': name,
        'point': report['point'],
        'se': report['se'],
        'interval': f'[{interval[0]:.4f}, {interval[1]:.4f}]' if interval else None,
        'members': report['member_count'],
        'positivity': verdict,
    }


def estimate_rows(estimates: dict) -> list[dict]:
    """
    Headline estimates of an analyze run, naive difference first.
    """
    rows = [_estimate_row('naive', estimates.get('naive'))]
    mode = estimates.get('mode')

    if mode == 'tree':
        rows.append(_estimate_row('tree gate', estimates['gate']))
    elif mode == 'knn':
        selected = estimates.get('selected')
        rows.append(_estimate_row(
            f'knn gate (K={selected["K"]})' if selected else 'knn gate (no K passes)',
            selected['gate'] if selected else None,
        ))
    elif mode == 'fracq':
        for label, cell in estimates['cells'].items():
            rows.append(_estimate_row(label, cell))
        rows.append(_estimate_row(f'fracq gate (q={estimates["q"]})', estimates['gate']))

    return rows


def bias_table(summary: pd.DataFrame) -> pd.DataFrame:
    """
    Mean estimate, bias, RMSE and SE per method across replications.
    """
    grouped = summary.groupby('method', sort=True)

    return pd.DataFrame({
        'method': list(grouped.groups),
        'replications': grouped.size().to_numpy(),
        'mean_estimate': grouped['estimate'].mean().to_numpy(),
        'mean_oracle_tau': grouped['oracle_tau'].mean().to_numpy(),
        'mean_bias': grouped['bias'].mean().to_numpy(),
        'rmse': grouped['bias'].apply(lambda bias: float(np.sqrt(np.mean(bias ** 2)))).to_numpy(),
        'mean_se': grouped['se'].mean().to_numpy(),
    })


def build_report(run_dir: str | Path) -> str:
    """
    Markdown summary of a run directory.
    :param run_dir: Directory holding a manifest and its artifacts
    :return: The report text
    """
    run_dir = Path(run_dir)
    manifest = RunManifest.read(run_dir)
    for name in manifest.artifacts:
        _artifact(run_dir, name)

    lines = [
        f'# Run {manifest.run_id}',
        '',
        f'- command: `{manifest.command}`',
        f'- version: {manifest.version}',
        f'- seeds: `{json.dumps(manifest.seeds, sort_keys=True)}`',
        f'- timings: {", ".join(f"{k} {v:.2f}s" for k, v in manifest.timings.items())}',
        '',
    ]

    if manifest.command == 'analyze':
        with open(_artifact(run_dir, ESTIMATES_FILE), 'r', encoding='utf-8') as file:
            estimates = json.load(file)

        lines += ['## Estimates', '', markdown_table(pd.DataFrame(estimate_rows(estimates))), '']

        if estimates.get('inference'):
            inference = estimates['inference']
            lines += [
                '## Randomization inference',
                '',
                f'p = {inference["p_value"]:.4f} over {inference["B"]} draws, '
                f'{inference["focal_units"]} focal units at hop {inference["hop"]}, '
                f'conditions {" vs ".join(inference["conditions"])}',
                '',
            ]

    if SWEEP_FILE in manifest.artifacts:
        lines += ['## K sweep', '', markdown_table(read_sweep_csv(run_dir / SWEEP_FILE)), '']

    if TREE_JSON_FILE in manifest.artifacts:
        tree = read_tree_json(run_dir / TREE_JSON_FILE)
        lines += [
            '## Exposure tree',
            '',
            '```',
            render_ascii(tree),
            '```',
            '',
            markdown_table(leaf_table(tree)),
            '',
        ]

    if SUMMARY_FILE in manifest.artifacts:
        summary = pd.read_csv(run_dir / SUMMARY_FILE)
        lines += [
            '## Bias against the oracle effect',
            '',
            markdown_table(bias_table(summary)),
            '',
            '### Per replication',
            '',
            markdown_table(summary),
            '',
        ]

    return '\n'.join(lines)


def cmd_report(args: argparse.Namespace):
    """
    Write a markdown summary of a finished run.
    """
    text = build_report(args.run_dir)
    path = args.run_dir / REPORT_FILE
    with open(path, 'w', encoding='utf-8') as file:
        file.write(text)

    LOGGER.info('Report written to %s', path)


def register(subparsers: argparse._SubParsersAction):      # pylint: disable=protected-access
    parser = subparsers.add_parser(
        'report',
        help='Summarize a finished run as markdown',
        description='Render the estimates, positivity verdicts, K sweep, tree and '
                    'bias tables of a run directory into report.md.',
    )
    parser.add_argument('--run-dir', type=Path, required=True,
                        help='Directory written by analyze or simulate')
    parser.set_defaults(handler=cmd_report)
