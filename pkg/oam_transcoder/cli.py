"""Command-line entry point: one subcommand per scenario."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import TranscoderConfig, __version__
from .config import PROFILES, RunConfig, load_config
from .exceptions import TranscoderError
from .scenarios import get_all_scenarios, get_scenario
from .utils.io import OutputWriter, write_error

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ENGINE_ERROR = 2


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="YAML run file layered over the profile.")
    parser.add_argument("--profile", default=TranscoderConfig.default_profile, choices=sorted(PROFILES),
                        help="Built-in parameter profile.")
    parser.add_argument("--out", type=Path, help="Output directory (overrides output_dir).")
    parser.add_argument("--seed", type=int, help="Seed for lock noise and intensity jitter (overrides seed).")
    parser.add_argument("--workers", type=int, default=1, help="Worker threads for matrix rows and sweep points.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oam-transcoder",
        description="Simulate conversion between OAM superpositions and time-bin pulse trains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)
    for scenario in get_all_scenarios():
        command = sub.add_parser(scenario.command, help=scenario.description)
        command.set_defaults(scenario=scenario.slug)
        _add_common_arguments(command)
    return parser


def run(config: RunConfig, workers: int = 1, writer: Optional[OutputWriter] = None) -> int:
    """
    Execute the configured scenario and write its manifest.

    Args:
        config: Validated run configuration
        workers: Worker threads
        writer: Output writer, one for config.output_dir by default

    Returns:
        Exit status: 0 on success, 2 on an engine error, 1 on anything unexpected
    """
    writer = writer or OutputWriter(config.output_dir)
    try:
        scenario = get_scenario(config.scenario)(config, writer, workers)
        result = scenario.run()
    except TranscoderError as e:
        logger.error(f"Scenario '{config.scenario}' failed: {e.message}", exc_info=True)
        write_error(writer, e)
        writer.write_manifest(config.scenario, {}, status=EXIT_ENGINE_ERROR)
        return EXIT_ENGINE_ERROR
    except Exception as e:
        logger.error(f"Unexpected failure in scenario '{config.scenario}': {e}", exc_info=True)
        return EXIT_UNEXPECTED

    writer.write_manifest(config.scenario, result['summary'], status=EXIT_OK)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    level = logging.WARNING if ns.verbose == 0 else logging.INFO if ns.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    overrides = {'scenario': ns.scenario}
    if ns.seed is not None:
        overrides['seed'] = ns.seed
    if ns.out is not None:
        overrides['output_dir'] = str(ns.out)

    try:
        config = load_config(ns.config, profile=ns.profile, overrides=overrides)
    except TranscoderError as e:
        logger.error(f"Invalid configuration: {e.message}", exc_info=True)
        writer = OutputWriter(ns.out or Path(TranscoderConfig.default_settings['output_dir']))
        write_error(writer, e)
        writer.write_manifest(ns.scenario, {}, status=EXIT_ENGINE_ERROR)
        return EXIT_ENGINE_ERROR

    return run(config, workers=ns.workers)


if __name__ == "__main__":
    sys.exit(main())
