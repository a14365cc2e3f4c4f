"""
Input Validators for Streamflow

Pre-flight checks on the files the command-line interface reads and
writes: corpus files, scenario files and run output directories.
"""

import os
from pathlib import Path
from typing import List, Tuple

from loguru import logger

CORPUS_EXTENSIONS = [".jsonl", ".ndjson", ".json", ".txt"]

# Files a finished `run` leaves behind
RUN_ARTIFACTS = [
    "description.json",
    "events.json",
    "streams.json",
    "alluvial.svg",
    "stream_graph.dot",
    "modularity.csv",
]


class InputValidator:
    """
    Validates files before the pipeline touches them.

    Every check returns a (ok, reason) tuple; callers decide which
    exception to raise.
    """

    def __init__(self, max_file_size_mb: float = 512.0):
        """
        Initialize the validator.

        Args:
            max_file_size_mb: Largest corpus or scenario file accepted
        """
        self.max_file_size_mb = max_file_size_mb

    def validate_readable_file(self, file_path: str) -> Tuple[bool, str]:
        """
        Validate that a file exists, is a regular file and is readable.

        Args:
            file_path: Path to file to validate

        Returns:
            Tuple of (is_valid, reason)
        """
        path = Path(file_path)

        if not path.exists():
            return False, f"File does not exist: {file_path}"

        if not path.is_file():
            return False, f"Not a regular file: {file_path}"

        if not os.access(path, os.R_OK):
            return False, f"File is not readable: {file_path}"

        size_mb = path.stat().st_size / (1024 * 1024)
        if size_mb > self.max_file_size_mb:
            return False, f"File too large: {size_mb:.1f}MB (max {self.max_file_size_mb:.0f}MB)"

        return True, "File is readable"

    def validate_corpus_file(self, file_path: str) -> Tuple[bool, str]:
        """
        Validate a JSON Lines corpus file before parsing.

        Args:
            file_path: Path to the corpus

        Returns:
            Tuple of (is_valid, reason)
        """
        ok, reason = self.validate_readable_file(file_path)
        if not ok:
            return ok, reason

        suffix = Path(file_path).suffix.lower()
        if suffix and suffix not in CORPUS_EXTENSIONS:
            logger.warning(f"Unusual corpus extension {suffix}; parsing as JSON Lines anyway")

        return True, "Corpus file is readable"

    def validate_run_dir(self, run_dir: str, required: List[str] = None) -> Tuple[bool, str]:
        """
        Validate that a run output directory holds the artifacts scoring needs.

        Args:
            run_dir: Directory written by `run`
            required: Artifact names to require (defaults to events and streams JSON)

        Returns:
            Tuple of (is_valid, reason)
        """
        path = Path(run_dir)
        if not path.is_dir():
            return False, f"Run directory does not exist: {run_dir}"

        required = required or ["events.json", "streams.json"]
        missing = [name for name in required if not (path / name).is_file()]
        if missing:
            return False, f"Run directory is missing: {', '.join(missing)}"

        return True, "Run directory is complete"
