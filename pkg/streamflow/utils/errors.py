"""
Exception hierarchy for Streamflow.

Every error carries the exit code the command-line interface reports for it.
"""

from typing import Iterable, Optional


class StreamflowError(Exception):
    """Base class for all Streamflow errors."""

    exit_code = 1


class CorpusError(StreamflowError):
    """The corpus could not be read or parsed."""

    exit_code = 2


class CorpusReadError(CorpusError):
    """Corpus file is missing or unreadable."""


class CorpusParseError(CorpusError):
    """A corpus line is not a valid article record."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class DuplicateIdError(CorpusError):
    """Two corpus lines share an article id."""

    def __init__(self, article_id: str, line_number: Optional[int] = None):
        self.article_id = article_id
        self.line_number = line_number
        where = f" (line {line_number})" if line_number is not None else ""
        super().__init__(f"duplicate article id: {article_id!r}{where}")


class ConfigError(StreamflowError):
    """Invalid configuration file, setting or flag."""

    exit_code = 3


class InvalidScenarioError(StreamflowError):
    """A synthetic scenario violates its invariants."""

    exit_code = 3


class MismatchedCorpusError(StreamflowError):
    """Ground truth and run output describe different corpora."""

    exit_code = 3


class NonConvergenceError(StreamflowError):
    """The denoising loop hit its iteration cap."""

    exit_code = 4

    def __init__(self, iterations: int, windows: Iterable[int]):
        self.iterations = iterations
        self.windows = sorted(set(windows))
        super().__init__(
            f"denoising did not converge after {iterations} iterations; "
            f"oscillating windows: {self.windows}"
        )


class CoverageError(StreamflowError):
    """A partition does not cover exactly the nodes of its graph."""


class UndefinedInputError(StreamflowError):
    """Input for which the requested quantity is undefined."""


class CorrectionAbortedError(StreamflowError):
    """A correction would leave one side empty; the event stays structural."""
