"""Command-line entry point: ``pslab run|validate|list-scenarios``."""

from __future__ import annotations

import argparse
import logging
import sys

import structlog

from phasespace_lab.config import settings
from phasespace_lab.services import scenarios
from phasespace_lab.utils import formatting
from phasespace_lab.utils.errors import ConfigError, PhaseSpaceError

EXIT_PASS = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}

logger = structlog.get_logger()


def configure_logging(level_name: str | None = None) -> None:
    """Key-value console logs on stderr; stdout carries result tables only."""
    name = (level_name or settings.log_level).upper()
    level = getattr(logging, name if name in _LOG_LEVELS else "INFO")
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(level),
        processors=[
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pslab", description="Phase-space concentration experiments")
    parser.add_argument("--log-level", default=None, help="overrides PSLAB_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario config")
    run.add_argument("config")
    run.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    run.add_argument("--out", default=None, help=f"output directory (default: config, then {settings.output_dir})")
    run.add_argument("--threads", type=int, default=None, help="worker threads for restarts and sweeps")

    validate = sub.add_parser("validate", help="list schema violations without running")
    validate.add_argument("config")

    sub.add_parser("list-scenarios", help="print the available scenarios")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = scenarios.load_config(args.config)
    except ConfigError as exc:
        print(formatting.format_violations(exc.violations))
        return EXIT_CONFIG
    if args.seed is not None:
        config = config.model_copy(update={"seed": args.seed})
    if args.threads is not None and args.threads < 1:
        print("- threads: must be at least 1")
        return EXIT_CONFIG

    try:
        result = scenarios.run(config, out_dir=args.out, threads=args.threads)
    except PhaseSpaceError as exc:
        logger.error("scenario_failed", scenario=config.scenario.value, error=str(exc))
        return EXIT_CONFIG
    print(formatting.format_run_result(result))
    return EXIT_PASS if result.passed else EXIT_TOLERANCE


def _cmd_validate(args: argparse.Namespace) -> int:
    violations = scenarios.validate(args.config)
    print(formatting.format_violations(violations))
    return EXIT_CONFIG if violations else EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    """CLI entry point for pslab."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        match args.command:
            case "run":
                return _cmd_run(args)
            case "validate":
                return _cmd_validate(args)
            case _:
                print(formatting.format_scenarios())
                return EXIT_PASS
    except OSError as exc:
        logger.error("config_unreadable", path=getattr(args, "config", None), error=str(exc))
        return EXIT_CONFIG
    except Exception:
        logger.exception("unexpected_error", command=args.command)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
