#!/usr/bin/env python3
"""
Main Application for Streamflow

Command-line entry point of the mesoscale history pipeline:
- run: detect, link and denoise communities, extract streams, write artifacts
- windows: show the windows a corpus yields
- synth: generate a synthetic corpus with planted streams and events
- score: compare a run with the ground truth of a synthetic corpus
"""

import argparse
import sys
from pathlib import Path
from typing import Any, List, Optional

import yaml
from loguru import logger

from streamflow.services.pipeline_service import PipelineService
from streamflow.utils.config_manager import ConfigManager
from streamflow.utils.errors import ConfigError, StreamflowError


class StreamflowApp:
    """
    Main application class for Streamflow.

    Owns configuration and logging, and dispatches commands to the
    pipeline service.
    """

    def __init__(self, config_path: Optional[str] = None, log_level: Optional[str] = None):
        """
        Initialize the application.

        Args:
            config_path: Path to configuration file (./config.yaml or defaults when omitted)
            log_level: Log level overriding environment and configuration
        """
        self.config_manager = ConfigManager(config_path)

        self._setup_logging(log_level)

        self.pipeline = PipelineService(self.config_manager)

    def _setup_logging(self, log_level: Optional[str] = None) -> None:
        """Setup logging configuration."""
        log_config = self.config_manager.get_log_config()
        level = (log_level or log_config["level"]).upper()

        # Remove default logger
        logger.remove()

        # Logs go to stderr; stdout carries command output
        logger.add(
            sys.stderr,
            level=level,
            format=log_config["format"],
            colorize=False,
        )

        if log_config["file"]:
            logger.add(
                log_config["file"],
                level=level,
                format=log_config["format"],
                rotation=log_config["rotation"],
                retention=log_config["retention"],
                compression="zip",
            )

        logger.debug(f"Logging configured at {level}")

    def _run_config(self, args: argparse.Namespace):
        return self.config_manager.run_config(
            corpus=args.corpus,
            out=getattr(args, "out", None),
            window=args.window,
            step=args.step,
            min_shared_refs=args.min_shared_refs,
            binarize=args.binarize,
            seeds=getattr(args, "seeds", None),
            seed=getattr(args, "seed", None),
            detector=getattr(args, "detector", None),
            resolution=getattr(args, "resolution", None),
            similarity=getattr(args, "similarity", None),
            link_threshold=getattr(args, "link_threshold", None),
            max_iterations=getattr(args, "max_iterations", None),
        )

    def run(self, args: argparse.Namespace) -> int:
        """Run the pipeline and print its summary."""
        config = self._run_config(args)
        result = self.pipeline.run(config)
        summary = result.summary()
        summary["out"] = str(config.out)
        _print(summary)
        return 0

    def windows(self, args: argparse.Namespace) -> int:
        """Print per-window statistics."""
        _print({"windows": self.pipeline.windows(self._run_config(args))})
        return 0

    def synth(self, args: argparse.Namespace) -> int:
        """Generate a synthetic corpus and its ground truth."""
        written = self.pipeline.synthesize(args.scenario, Path(args.out), args.seed)
        _print({name: str(path) for name, path in written.items()})
        return 0

    def score(self, args: argparse.Namespace) -> int:
        """Score a run directory against ground truth."""
        report = self.pipeline.score(args.truth, args.run, Path(args.report) if args.report else None)
        _print(report.model_dump(mode="json"))
        return 0


def _print(payload: Any) -> None:
    print(yaml.safe_dump(payload, default_flow_style=False, sort_keys=True), end="")


def _add_slicing_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="Corpus file (JSON Lines)")
    parser.add_argument("--window", type=int, help="Window width w in years (default 4)")
    parser.add_argument("--step", type=int, help="Window step dt in years (default 1)")
    parser.add_argument(
        "--min-shared-refs", type=int, dest="min_shared_refs",
        help="Minimum shared references for a coupling edge (default 2)",
    )
    parser.add_argument(
        "--binarize", action="store_true", default=None,
        help="Use unit weights instead of shared-reference counts",
    )


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors are configuration errors (exit 3)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="streamflow",
        description="Streamflow - mesoscale history of a temporal citation network",
    )
    parser.add_argument("--config", default=None, help="Path to configuration file")
    parser.add_argument("--log-level", dest="log_level", default=None, help="Log level (overrides STREAMFLOW_LOG)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Run command
    run_parser = subparsers.add_parser("run", help="Run the full pipeline")
    _add_slicing_options(run_parser)
    run_parser.add_argument("--seeds", type=int, help="Number of detection seeds (default 10)")
    run_parser.add_argument("--seed", type=int, help="First master seed (default 0)")
    run_parser.add_argument("--detector", help="Community detector: louvain or greedy")
    run_parser.add_argument("--resolution", type=float, help="Modularity resolution (default 1.0)")
    run_parser.add_argument("--similarity", help="Community similarity: jaccard or overlap")
    run_parser.add_argument("--link-threshold", type=float, dest="link_threshold", help="Minimum link similarity")
    run_parser.add_argument("--max-iterations", type=int, dest="max_iterations", help="Denoising iteration cap")
    run_parser.add_argument("--out", help="Output directory")

    # Windows command
    windows_parser = subparsers.add_parser("windows", help="Show the windows of a corpus")
    _add_slicing_options(windows_parser)

    # Synth command
    synth_parser = subparsers.add_parser("synth", help="Generate a synthetic corpus")
    synth_parser.add_argument("--scenario", required=True, help="Scenario file (JSON)")
    synth_parser.add_argument("--seed", type=int, default=0, help="Random seed")
    synth_parser.add_argument("--out", required=True, help="Output directory")

    # Score command
    score_parser = subparsers.add_parser("score", help="Score a run against ground truth")
    score_parser.add_argument("--truth", required=True, help="truth.json written by synth")
    score_parser.add_argument("--run", required=True, help="Output directory of run")
    score_parser.add_argument("--report", default=None, help="Report path (default RUN/score.json)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point with command line interface."""
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help()
            return 0

        app = StreamflowApp(args.config, args.log_level)
        handler = {
            "run": app.run,
            "windows": app.windows,
            "synth": app.synth,
            "score": app.score,
        }[args.command]
        return handler(args)

    except StreamflowError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except Exception as e:
        logger.exception(f"Application error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
