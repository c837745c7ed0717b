import argparse
import logging

from motif_exposure import __version__
from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.utils import exception_handler
from . import analyze, report, simulate


def build_parser() -> argparse.ArgumentParser:
    """
    Create the command-line parser with every subcommand registered.

    :return: The configured parser
    """
    parser = argparse.ArgumentParser(
        prog='motif-exposure',
        description='Exposure mapping with causal network motifs',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Overrides the configured logging level')

    subparsers = parser.add_subparsers(dest='command', required=True)
    analyze.register(subparsers)
    simulate.register(subparsers)
    report.register(subparsers)

    return parser


@exception_handler
def run(args: argparse.Namespace):
    return args.handler(args)


def main(argv: list[str] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.log_level:
        LOGGER.setLevel(args.log_level)
        for handler in LOGGER.handlers:
            handler.setLevel(logging.getLevelName(args.log_level))

    return run(args)
