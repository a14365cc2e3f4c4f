"""
Synthetic Corpora for Streamflow

Generates corpora with planted streams and planted split/merge events,
and scores how well a run recovers them. Every planted stream cites a
pool of synthetic references; noise borrows references from the pools of
other streams alive in the same year.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..utils.errors import CorpusReadError, InvalidScenarioError, MismatchedCorpusError
from ..utils.validators import InputValidator
from .denoise import Description
from .ingest import ArticleRecord
from .streams import Stream


class PlantedStream(BaseModel):
    """A research line citing its own reference pool."""

    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    pool_size: int = Field(12, ge=1)
    pool: Optional[List[str]] = None
    articles_per_window: int = Field(3, ge=1)
    refs_per_article: int = Field(8, ge=1)
    authors: List[str] = Field(default_factory=list)

    def reference_pool(self) -> List[str]:
        if self.pool is not None:
            return sorted(set(self.pool))
        return [f"{self.id}-r{k:03d}" for k in range(self.pool_size)]

    def author_list(self) -> List[str]:
        return list(self.authors) or [f"{self.id}-author{k}" for k in range(3)]


class PlantedEvent(BaseModel):
    """
    A split of one stream or a merge of two, starting at year index `window`.

    `children` names the streams the event creates; by default a split of
    X creates X.a and X.b and a merge of X and Y creates X+Y.
    """

    model_config = ConfigDict(extra="forbid")

    window: int = Field(ge=0)
    kind: Literal["split", "merge"]
    streams: List[str]
    children: Optional[List[str]] = None

    @model_validator(mode="after")
    def _arity(self) -> "PlantedEvent":
        expected = 1 if self.kind == "split" else 2
        if len(self.streams) != expected:
            raise ValueError(f"a {self.kind} targets {expected} stream(s), got {len(self.streams)}")
        if len(set(self.streams)) != len(self.streams):
            raise ValueError(f"a merge needs two distinct streams, got {self.streams}")
        produced = 2 if self.kind == "split" else 1
        if self.children is not None and len(self.children) != produced:
            raise ValueError(f"a {self.kind} creates {produced} stream(s), got {len(self.children)}")
        return self

    def child_ids(self) -> List[str]:
        if self.children is not None:
            return list(self.children)
        if self.kind == "split":
            return [f"{self.streams[0]}.a", f"{self.streams[0]}.b"]
        return ["+".join(self.streams)]


class Scenario(BaseModel):
    """
    A synthetic corpus description.

    `n_windows` counts one-year steps: the corpus spans
    start_year .. start_year + n_windows - 1.
    """

    model_config = ConfigDict(extra="forbid")

    n_windows: int = Field(ge=1)
    start_year: int = 1970
    streams: List[PlantedStream] = Field(min_length=1)
    events: List[PlantedEvent] = Field(default_factory=list)
    noise: float = Field(0.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        ids = [stream.id for stream in self.streams]
        if len(set(ids)) != len(ids):
            raise ValueError(f"stream ids must be unique: {ids}")

        for event in self.events:
            if not 0 < event.window < self.n_windows:
                raise ValueError(f"event window {event.window} outside 1..{self.n_windows - 1}")

        seen: Dict[str, str] = {}
        for stream in self.streams:
            for ref in stream.reference_pool():
                if ref in seen:
                    raise ValueError(f"reference {ref!r} is in the pools of {seen[ref]!r} and {stream.id!r}")
                seen[ref] = stream.id
        return self


class TruthStream(BaseModel):
    first_year: int
    last_year: int
    parents: List[str] = Field(default_factory=list)
    authors: List[str] = Field(default_factory=list)


class TruthEvent(BaseModel):
    year: int
    kind: Literal["split", "merge"]
    parents: List[str]
    children: List[str]

    @property
    def streams(self) -> FrozenSet[str]:
        return frozenset(self.parents) | frozenset(self.children)


class TruthArticle(BaseModel):
    stream: str
    year: int


class GroundTruth(BaseModel):
    """Planted streams, events and per-article stream membership."""

    start_year: int
    n_windows: int
    streams: Dict[str, TruthStream]
    events: List[TruthEvent]
    articles: Dict[str, TruthArticle]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


class ScoreReport(BaseModel):
    event_precision: float
    event_recall: float
    membership_agreement: float
    planted_events: int
    detected_events: int
    matched_events: int


@dataclass
class _Lineage:
    id: str
    pool: List[str]
    first: int
    last: int
    articles_per_window: int
    refs_per_article: int
    authors: List[str]
    parents: List[str] = field(default_factory=list)


def _check_pool(stream_id: str, pool: Sequence[str], refs_per_article: int) -> None:
    if len(pool) < refs_per_article:
        raise InvalidScenarioError(
            f"stream {stream_id!r}: pool of {len(pool)} references is smaller than "
            f"refs_per_article={refs_per_article}"
        )


def plan_lineages(scenario: Scenario) -> Tuple[Dict[str, _Lineage], List[TruthEvent]]:
    """
    Resolve the scenario's events into stream lifetimes and pools.

    Raises:
        InvalidScenarioError: If an event targets a stream that is not
            alive, reuses an id, or leaves a pool smaller than
            refs_per_article
    """
    last = scenario.n_windows - 1
    lineages: Dict[str, _Lineage] = {}
    for stream in scenario.streams:
        pool = stream.reference_pool()
        _check_pool(stream.id, pool, stream.refs_per_article)
        lineages[stream.id] = _Lineage(
            stream.id, pool, 0, last, stream.articles_per_window, stream.refs_per_article, stream.author_list()
        )

    events: List[TruthEvent] = []
    for event in sorted(scenario.events, key=lambda e: e.window):
        for target in event.streams:
            lineage = lineages.get(target)
            if lineage is None or not lineage.first < event.window <= lineage.last:
                raise InvalidScenarioError(
                    f"{event.kind} at window {event.window}: stream {target!r} is not alive before it"
                )
        children = event.child_ids()
        clash = [child for child in children if child in lineages]
        if clash:
            raise InvalidScenarioError(f"{event.kind} at window {event.window}: stream id {clash[0]!r} already used")

        parents = [lineages[target] for target in event.streams]
        for parent in parents:
            parent.last = event.window - 1

        if event.kind == "split":
            (parent,) = parents
            half = len(parent.pool) // 2
            for rank, (child, pool) in enumerate(zip(children, (parent.pool[:half], parent.pool[half:]))):
                _check_pool(child, pool, parent.refs_per_article)
                authors = parent.authors[rank:] + parent.authors[:rank]
                lineages[child] = _Lineage(
                    child, list(pool), event.window, last,
                    parent.articles_per_window, parent.refs_per_article, authors, [parent.id],
                )
        else:
            (child,) = children
            a, b = parents
            lineages[child] = _Lineage(
                child,
                sorted(set(a.pool) | set(b.pool)),
                event.window,
                last,
                a.articles_per_window + b.articles_per_window,
                max(a.refs_per_article, b.refs_per_article),
                a.authors + [author for author in b.authors if author not in a.authors],
                [a.id, b.id],
            )

        events.append(
            TruthEvent(
                year=scenario.start_year + event.window,
                kind=event.kind,
                parents=list(event.streams),
                children=children,
            )
        )

    return lineages, events


def generate(scenario: Scenario, rng: np.random.Generator) -> Tuple[List[ArticleRecord], GroundTruth]:
    """
    Generate a corpus and its ground truth.

    Each year, every alive stream emits articles_per_window articles citing
    refs_per_article distinct references from its pool. With probability
    `noise` per reference, the reference is replaced by one from the pool
    of another stream alive that year.

    Args:
        scenario: Validated scenario
        rng: Random generator

    Returns:
        (articles ordered by year then stream id, ground truth)

    Raises:
        InvalidScenarioError: If a pool is smaller than refs_per_article
    """
    lineages, events = plan_lineages(scenario)

    articles: List[ArticleRecord] = []
    membership: Dict[str, TruthArticle] = {}
    for step in range(scenario.n_windows):
        year = scenario.start_year + step
        alive = [lineages[key] for key in sorted(lineages) if lineages[key].first <= step <= lineages[key].last]
        for lineage in alive:
            others = [other for other in alive if other.id != lineage.id]
            for j in range(lineage.articles_per_window):
                drawn = [str(ref) for ref in rng.choice(lineage.pool, size=lineage.refs_per_article, replace=False)]
                if scenario.noise > 0 and others:
                    borrowed = rng.random(len(drawn)) < scenario.noise
                    for slot in np.flatnonzero(borrowed):
                        donor = others[int(rng.integers(len(others)))]
                        drawn[slot] = donor.pool[int(rng.integers(len(donor.pool)))]

                authors = [lineage.authors[0]]
                if len(lineage.authors) > 1:
                    authors.append(lineage.authors[1 + j % (len(lineage.authors) - 1)])

                article_id = f"{lineage.id}-{year}-{j:02d}"
                articles.append(
                    ArticleRecord(id=article_id, year=year, authors=tuple(authors), refs=frozenset(drawn))
                )
                membership[article_id] = TruthArticle(stream=lineage.id, year=year)

    truth = GroundTruth(
        start_year=scenario.start_year,
        n_windows=scenario.n_windows,
        streams={
            key: TruthStream(
                first_year=scenario.start_year + lineage.first,
                last_year=scenario.start_year + lineage.last,
                parents=lineage.parents,
                authors=lineage.authors,
            )
            for key, lineage in sorted(lineages.items())
        },
        events=events,
        articles=membership,
    )
    logger.info(
        f"Generated {len(articles)} articles over {scenario.n_windows} years, "
        f"{len(lineages)} planted streams, {len(events)} planted events"
    )
    return articles, truth


def _read_json_model(model_cls, path: str, what: str):
    ok, reason = InputValidator().validate_readable_file(path)
    if not ok:
        raise CorpusReadError(reason)
    try:
        return model_cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ())) or what
        raise InvalidScenarioError(f"invalid {what} {path}: {location}: {first['msg']}") from e


def load_scenario(path: str) -> Scenario:
    """Read a JSON scenario file."""
    return _read_json_model(Scenario, path, "scenario")


def load_truth(path: str) -> GroundTruth:
    """Read a ground-truth file written by `synth`."""
    return _read_json_model(GroundTruth, path, "truth file")


@dataclass(frozen=True)
class RecoveredEvent:
    kind: str
    window: int
    articles: FrozenSet[str]


@dataclass
class RecoveredRun:
    """What scoring needs from a run: window years, structural events, stream of each occurrence."""

    windows: Dict[int, Tuple[int, int]]
    events: List[RecoveredEvent]
    occurrences: Dict[Tuple[int, str], int]

    @classmethod
    def from_description(cls, description: Description, streams: Sequence[Stream]) -> "RecoveredRun":
        windows = {
            graph.window.index: (graph.window.start_year, graph.window.end_year)
            for graph in description.slices
        }
        events = [
            RecoveredEvent(
                event.kind.value,
                event.window,
                frozenset(event.trunk_members).union(*event.branch_members),
            )
            for event in description.structural_events()
        ]
        occurrences = {
            (ref.window, article): stream.id
            for stream in streams
            for ref in stream.members
            for article in description.members(ref)
        }
        return cls(windows, events, occurrences)

    @classmethod
    def from_run_dir(cls, run_dir: str) -> "RecoveredRun":
        """Rebuild from the events.json and streams.json of a `run` output directory."""
        ok, reason = InputValidator().validate_run_dir(run_dir)
        if not ok:
            raise CorpusReadError(reason)
        root = Path(run_dir)
        events_doc = json.loads((root / "events.json").read_text(encoding="utf-8"))
        streams_doc = json.loads((root / "streams.json").read_text(encoding="utf-8"))

        windows: Dict[int, Tuple[int, int]] = {}
        occurrences: Dict[Tuple[int, str], int] = {}
        for stream in streams_doc["streams"]:
            for member in stream["members"]:
                windows[member["window"]] = (member["start_year"], member["end_year"])
                for article in member["articles"]:
                    occurrences[(member["window"], article)] = stream["id"]

        events = []
        for event in events_doc["events"]:
            if event["classification"] != "structural":
                continue
            windows.setdefault(event["window"], (event["start_year"], event["end_year"]))
            articles = set(event["trunk"]["members"])
            for branch in event["branches"]:
                articles.update(branch["members"])
            events.append(RecoveredEvent(event["kind"], event["window"], frozenset(articles)))
        return cls(windows, events, occurrences)


def _event_matches(planted: TruthEvent, detected: RecoveredEvent, truth: GroundTruth, span: Tuple[int, int]) -> bool:
    if planted.kind != detected.kind or not span[0] - 1 <= detected.window <= span[1] + 1:
        return False
    involved = planted.streams
    inside = sum(
        1 for article in detected.articles
        if article in truth.articles and truth.articles[article].stream in involved
    )
    return 2 * inside > len(detected.articles)


def score_recovered(truth: GroundTruth, run: RecoveredRun) -> ScoreReport:
    """
    Event precision/recall and membership agreement of a run against ground truth.

    A planted event is recovered by a structural event of the same kind,
    detected in a window containing the event year or one window either
    side, whose articles mostly belong to the planted event's streams.
    Matching is one-to-one. Membership agreement maps every recovered
    stream to its plurality planted stream and counts the (window,
    article) occurrences it gets right.

    Raises:
        MismatchedCorpusError: If the run and the truth cover different articles
    """
    covered = {
        article
        for article, info in truth.articles.items()
        if any(start <= info.year <= end for start, end in run.windows.values())
    }
    observed = {article for _, article in run.occurrences}
    if observed != covered:
        unknown = sorted(observed - set(truth.articles))
        missing = sorted(covered - observed)
        raise MismatchedCorpusError(
            f"run and truth disagree on articles: {len(unknown)} unknown to the truth, "
            f"{len(missing)} missing from the run"
        )

    matched = 0
    used = set()
    for planted in sorted(truth.events, key=lambda e: (e.year, e.kind)):
        containing = [index for index, (start, end) in run.windows.items() if start <= planted.year <= end]
        if not containing:
            continue
        span = (min(containing), max(containing))
        candidates = [
            (0 if span[0] <= detected.window <= span[1] else min(abs(detected.window - s) for s in span), k)
            for k, detected in enumerate(run.events)
            if k not in used and _event_matches(planted, detected, truth, span)
        ]
        if candidates:
            used.add(min(candidates)[1])
            matched += 1

    precision = matched / len(run.events) if run.events else 1.0
    recall = matched / len(truth.events) if truth.events else 1.0

    by_stream: Dict[int, Dict[str, int]] = {}
    for (_, article), stream_id in run.occurrences.items():
        planted = truth.articles[article].stream
        counts = by_stream.setdefault(stream_id, {})
        counts[planted] = counts.get(planted, 0) + 1
    agreeing = sum(max(counts.values()) for counts in by_stream.values())
    agreement = agreeing / len(run.occurrences) if run.occurrences else 1.0

    report = ScoreReport(
        event_precision=precision,
        event_recall=recall,
        membership_agreement=agreement,
        planted_events=len(truth.events),
        detected_events=len(run.events),
        matched_events=matched,
    )
    logger.info(
        f"Recovery: precision={precision:.3f}, recall={recall:.3f}, agreement={agreement:.3f}"
    )
    return report


def score_recovery(truth: GroundTruth, description: Description, streams: Sequence[Stream]) -> ScoreReport:
    """Score an in-memory description (see score_recovered)."""
    return score_recovered(truth, RecoveredRun.from_description(description, streams))


def score_run_dir(truth: GroundTruth, run_dir: str) -> ScoreReport:
    """Score the artifacts of a `run` output directory (see score_recovered)."""
    return score_recovered(truth, RecoveredRun.from_run_dir(run_dir))
