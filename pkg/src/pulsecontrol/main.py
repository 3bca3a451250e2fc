"""Command-line entry point for the pulse-control simulator."""
from __future__ import annotations

import argparse
import os
import sys
from enum import Enum
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from loguru import logger

from pulsecontrol.config import RunConfig, load_run_config
from pulsecontrol.dynamics.pulses import Normalization
from pulsecontrol.errors import PulseControlError
from pulsecontrol.logging_utils import LoggingContext, configure_logging
from pulsecontrol.runner import run_compare, run_measures, run_oracle, run_scan, run_simulate

DEFAULT_CONFIG = Path("config.yaml")


class Command(str, Enum):
    """Supported subcommands."""

    SIMULATE = "simulate"
    ORACLE = "oracle"
    COMPARE = "compare"
    SCAN = "scan"
    MEASURES = "measures"


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Run configuration (YAML). Defaults to ./config.yaml when present.",
    )
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration key, e.g. --set schedule.tau_s_scaled=6.283185307179586.",
    )
    common.add_argument("--output", type=Path, default=None, help="Output directory (overrides output.path).")
    common.add_argument(
        "--normalization",
        choices=[n.value for n in Normalization],
        default=None,
        help="Concurrence prefactor convention (overrides normalization).",
    )

    parser = argparse.ArgumentParser(
        prog="pulsecontrol",
        description="Simulate Bell-pair dephasing under pi-pulse trains and its Fock-space reference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(Command.SIMULATE.value, parents=[common], help="Write the analytic concurrence trace.")
    sub.add_parser(Command.ORACLE.value, parents=[common], help="Run the Fock-space oracle.")
    compare = sub.add_parser(Command.COMPARE.value, parents=[common], help="Compare analytic and oracle traces.")
    compare.add_argument(
        "--self",
        dest="self_compare",
        action="store_true",
        help="Compare the analytic trace against itself (no oracle run).",
    )
    sub.add_parser(Command.SCAN.value, parents=[common], help="Scan and refine the pulse interval.")
    measures = sub.add_parser(Command.MEASURES.value, parents=[common], help="Entanglement measures of a matrix file.")
    measures.add_argument("matrix", type=Path, help="Density matrix file (text, YAML or JSON).")
    return parser.parse_args(argv)


def _load_config(args: argparse.Namespace) -> RunConfig:
    path = args.config
    if path is None and DEFAULT_CONFIG.exists():
        path = DEFAULT_CONFIG
    overrides = list(args.overrides)
    if args.normalization is not None:
        overrides.append(f"normalization={args.normalization}")
    config = load_run_config(path, overrides)
    if args.output is not None:
        config.output.path = str(args.output)
    return config


def _dispatch(command: Command, args: argparse.Namespace, config: RunConfig) -> None:
    if command is Command.SIMULATE:
        run_simulate(config)
    elif command is Command.ORACLE:
        run_oracle(config)
    elif command is Command.COMPARE:
        run_compare(config, self_compare=args.self_compare)
    elif command is Command.SCAN:
        run_scan(config)
    else:
        run_measures(args.matrix, config.output_dir)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code (0, 2, 3 or 4)."""
    load_dotenv()
    args = parse_args(argv)
    command = Command(args.command)
    try:
        config = _load_config(args)
    except PulseControlError as exc:
        logger.error("Configuration rejected | error={error}", error=str(exc), component="main")
        return exc.exit_code

    log_dir = Path(os.getenv("PULSECONTROL_LOG_DIR") or config.log_dir)
    configure_logging(log_dir, "pulsecontrol", log_config=config.logging_dict())

    with LoggingContext(command=command.value, component="main") as log:
        log.info("Starting command | config={config}", config=str(args.config or DEFAULT_CONFIG))
        try:
            _dispatch(command, args, config)
        except PulseControlError as exc:
            log.error(
                "Command failed | error_type={kind} exit_code={code} error={error}",
                kind=type(exc).__name__,
                code=exc.exit_code,
                error=str(exc),
            )
            return exc.exit_code
        log.info("Command finished")
    return 0


if __name__ == "__main__":
    sys.exit(main())
