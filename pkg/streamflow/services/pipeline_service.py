"""
Pipeline Service for Streamflow

Orchestrates the commands of the tool:
- run: corpus -> slices -> per-seed descriptions -> best description -> streams -> artifacts
- windows: per-window statistics for choosing w and dt
- synth: scenario -> synthetic corpus and ground truth
- score: ground truth + run output -> recovery report
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from ..utils.config_manager import ConfigManager, RunConfig
from ..utils.validators import InputValidator
from .denoise import Description, describe_seeds, pick_best
from .export_service import ExportService, dump_json
from .ingest import read_corpus
from .slicer import WindowConfig, build_slices, window_summary
from .streams import AlluvialLayout, ModularityPoint, Stream, extract_streams, label_streams, layout_alluvial, modularity_series
from .synth import GroundTruth, ScoreReport, generate, load_scenario, load_truth, score_run_dir


@dataclass
class RunResult:
    """Everything a `run` produced, in memory and on disk."""

    description: Description
    descriptions: List[Description]
    streams: List[Stream]
    layout: AlluvialLayout
    series: List[ModularityPoint]
    artifacts: Dict[str, Path] = field(default_factory=dict)

    def summary(self) -> dict:
        summary = self.description.summary()
        summary["streams"] = len(self.streams)
        return summary


class PipelineService:
    """
    Runs the Streamflow commands with shared configuration and validation.
    """

    def __init__(self, config_manager: Optional[ConfigManager] = None):
        """
        Initialize the pipeline service.

        Args:
            config_manager: Loaded configuration (defaults when omitted)
        """
        self.config_manager = config_manager or ConfigManager()
        self.validator = InputValidator()

    def run(self, config: RunConfig) -> RunResult:
        """
        Run the full pipeline and write the run artifacts.

        Args:
            config: Validated run settings

        Returns:
            RunResult
        """
        logger.info(f"Running pipeline on {config.corpus} with seeds {config.master_seeds}")
        articles = read_corpus(str(config.corpus), self.validator)
        slices = build_slices(
            articles, WindowConfig(config.window, config.step), config.min_shared_refs, config.binarize
        )
        if not slices:
            logger.warning("Corpus spans fewer years than one window; the description is empty")

        descriptions = describe_seeds(slices, config, config.master_seeds)
        best = pick_best(descriptions)
        logger.info(f"Selected seed {best.seed} with complexity={best.complexity:.4f}")

        streams = label_streams(extract_streams(best), best, articles)
        layout = layout_alluvial(streams, best)
        series = modularity_series(best)

        result = RunResult(best, descriptions, streams, layout, series)
        result.artifacts = ExportService(config.out).write_run(best, streams, layout, series, descriptions)
        return result

    def windows(self, config: RunConfig) -> List[dict]:
        """Per-window article, edge and isolated-node counts."""
        articles = read_corpus(str(config.corpus), self.validator)
        slices = build_slices(
            articles, WindowConfig(config.window, config.step), config.min_shared_refs, config.binarize
        )
        return window_summary(slices)

    def synthesize(self, scenario_path: str, out_dir: Path, seed: int = 0) -> Dict[str, Path]:
        """
        Generate a synthetic corpus and its ground truth.

        Returns:
            Paths of corpus.jsonl and truth.json
        """
        scenario = load_scenario(scenario_path)
        articles, truth = generate(scenario, np.random.default_rng(seed))
        return ExportService(out_dir).write_synth(articles, truth.to_json())

    def score(self, truth_path: str, run_dir: str, report_path: Optional[Path] = None) -> ScoreReport:
        """
        Score a run directory against ground truth and write the report.

        Args:
            truth_path: truth.json written by `synth`
            run_dir: Output directory of `run`
            report_path: Where to write the report (run_dir/score.json by default)

        Returns:
            ScoreReport
        """
        truth: GroundTruth = load_truth(truth_path)
        report = score_run_dir(truth, run_dir)
        target = Path(report_path) if report_path else Path(run_dir) / "score.json"
        dump_json(report.model_dump(mode="json"), target)
        logger.info(f"Score report written to {target}")
        return report
