"""
Corpus Ingestion for Streamflow

Parses the JSON Lines corpus format into article records and builds
bibliographic-coupling edges: two articles are linked by the number of
references they share, pairs below the sharing threshold stay unlinked.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy import sparse

from ..utils.errors import CorpusParseError, CorpusReadError, DuplicateIdError
from ..utils.validators import InputValidator


class ArticleRecord(BaseModel):
    """
    A time-stamped document with its reference identifiers.

    Reference ids are opaque, case-sensitive strings; duplicates in the
    input collapse because refs has set semantics.
    """

    model_config = ConfigDict(frozen=True, extra="ignore")

    id: str = Field(min_length=1)
    year: int
    authors: Tuple[str, ...] = ()
    refs: frozenset[str] = frozenset()
    title: Optional[str] = None

    def to_json_dict(self) -> dict:
        """Corpus-format dictionary with deterministic ordering of refs."""
        record = {
            "id": self.id,
            "year": self.year,
            "authors": list(self.authors),
            "refs": sorted(self.refs),
        }
        if self.title is not None:
            record["title"] = self.title
        return record


@dataclass(frozen=True, order=True)
class CouplingEdge:
    """Undirected coupling edge, canonical orientation a < b."""

    a: str
    b: str
    weight: int


def parse_corpus(lines: Iterable[str]) -> List[ArticleRecord]:
    """
    Parse corpus lines into article records, in input order.

    Blank lines are skipped. Line numbers in errors are 1-based.

    Args:
        lines: Iterable of JSON Lines text lines

    Returns:
        List of ArticleRecord

    Raises:
        CorpusParseError: If a line is not a valid article object
        DuplicateIdError: If an id appears twice
    """
    records: List[ArticleRecord] = []
    seen = {}

    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue

        try:
            record = ArticleRecord.model_validate_json(line)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first.get("loc", ())) or "record"
            raise CorpusParseError(line_number, f"{field}: {first['msg']}") from e

        if record.id in seen:
            raise DuplicateIdError(record.id, line_number)

        seen[record.id] = line_number
        records.append(record)

    return records


def read_corpus(path: str, validator: Optional[InputValidator] = None) -> List[ArticleRecord]:
    """
    Read and parse a corpus file.

    Args:
        path: Path to a UTF-8 JSON Lines corpus
        validator: Optional pre-configured validator

    Returns:
        List of ArticleRecord

    Raises:
        CorpusReadError: If the file is missing or unreadable
    """
    validator = validator or InputValidator()
    ok, reason = validator.validate_corpus_file(path)
    if not ok:
        raise CorpusReadError(reason)

    try:
        with open(path, "r", encoding="utf-8") as f:
            records = parse_corpus(f)
    except UnicodeDecodeError as e:
        raise CorpusReadError(f"corpus is not valid UTF-8: {path}") from e
    except OSError as e:
        raise CorpusReadError(f"cannot read corpus {path}: {e}") from e

    logger.info(f"Parsed {len(records)} articles from {Path(path).name}")
    return records


def write_corpus(articles: Sequence[ArticleRecord], path: Path) -> None:
    """Write articles in corpus format, one compact JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for article in articles:
            f.write(json.dumps(article.to_json_dict(), sort_keys=True, ensure_ascii=False))
            f.write("\n")


def coupling_edges(
    articles: Sequence[ArticleRecord],
    min_shared: int,
    binarize: bool = False,
) -> List[CouplingEdge]:
    """
    Build bibliographic-coupling edges between articles.

    The shared-reference counts come from the sparse product of the
    article-by-reference incidence matrix with its transpose.

    Args:
        articles: Article records with unique ids
        min_shared: Minimum number of shared references for an edge (>= 1)
        binarize: Emit weight 1 for every qualifying pair

    Returns:
        Edges sorted by (a, b)
    """
    if min_shared < 1:
        raise ValueError(f"min_shared must be >= 1, got {min_shared}")

    ordered = sorted(articles, key=lambda article: article.id)
    ids = [article.id for article in ordered]
    for left, right in zip(ids, ids[1:]):
        if left == right:
            raise DuplicateIdError(left)

    vocabulary = sorted({ref for article in ordered for ref in article.refs})
    if len(ordered) < 2 or not vocabulary:
        return []

    column = {ref: j for j, ref in enumerate(vocabulary)}
    rows = np.repeat(np.arange(len(ordered)), [len(article.refs) for article in ordered])
    cols = np.fromiter(
        (column[ref] for article in ordered for ref in sorted(article.refs)),
        dtype=np.int64,
        count=len(rows),
    )
    incidence = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)),
        shape=(len(ordered), len(vocabulary)),
    )

    shared = sparse.triu(incidence @ incidence.T, k=1).tocoo()
    keep = shared.data >= min_shared
    left, right, counts = shared.row[keep], shared.col[keep], shared.data[keep]
    order = np.lexsort((right, left))

    return [
        CouplingEdge(ids[left[k]], ids[right[k]], 1 if binarize else int(counts[k]))
        for k in order
    ]
