"""
Command-line entry point.

Usage:
    python -m src.cli <command> [--config FILE] [--seed N] [--replicates N]
                      [--k N] [--out DIR] [--render] [--threads N] [--log-level LEVEL]

Exit codes: 0 success, 1 configuration error, 2 validation error, 3 I/O error.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger

from ..core.config import load_config
from ..core.exceptions import TreeLabError
from .commands import COMMANDS

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{line} - {message}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treelab",
        description="Simulate uniform random trees with fixed degrees and heights",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m src.cli sample-tree --seed 7 --render     # Sample and draw one tree
  python -m src.cli matrix --k 3 --replicates 500     # Discrete distance matrices
  python -m src.cli limit-matrix --k 3                # Limit distance matrices
  python -m src.cli compare                           # Two-sample report
        """,
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Subcommand to run")
    parser.add_argument("--config", type=Path, default=None, help="Experiment file (YAML or JSON)")
    parser.add_argument("--seed", type=int, default=None, help="Experiment seed")
    parser.add_argument("--replicates", type=int, default=None, help="Monte Carlo replicates")
    parser.add_argument("--k", type=int, default=None, help="Number of sampled vertices")
    parser.add_argument("--out", type=Path, default=None, help="Output directory")
    parser.add_argument("--render", action="store_true", default=None, help="Also write an SVG drawing")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for replicates")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
        help="Log level (default: from config or TREELAB_LOG_LEVEL)",
    )
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "seed": args.seed,
        "replicates": args.replicates,
        "k": args.k,
        "output_dir": args.out,
        "render": args.render,
        "threads": args.threads,
        "log_level": args.log_level,
    }


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand and return its exit code.

    Unexpected exceptions are logged and re-raised.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or "INFO")

    try:
        config = load_config(args.config, overrides_from_args(args))
        configure_logging(config.log_level)
        logger.info(f"Running {args.command} (seed={config.seed})")
        written = COMMANDS[args.command](config)
    except TreeLabError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code
    except Exception:
        logger.exception(f"Unexpected error in {args.command}")
        raise

    for path in written:
        logger.info(f"Wrote {path}")
    return 0
