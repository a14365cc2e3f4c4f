"""
Event Denoising for Streamflow

Classifies split and merge events as structural (real) or ephemeral
(noise) from the t-1/t+1 and t-2/t+2 links, corrects ephemeral events,
and repeats until no ephemeral event is left. Descriptions obtained from
different detection seeds are ranked by their complexity score.

Classification rule: the t-2/t+2 links skip the contested window, so
they show whether two streams pass through it (ephemeral merge) or one
stream passes through a split that heals immediately (ephemeral split).
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from ..utils.config_manager import PipelineConfig
from ..utils.errors import CorrectionAbortedError, NonConvergenceError, UndefinedInputError
from .ingest import ArticleRecord
from .linker import (
    PREDECESSOR,
    SUCCESSOR,
    CommunityRef,
    Similarity,
    TemporalLinks,
    get_similarity,
    jaccard,
    link_all,
)
from .partition import CommunityDetector, Partition, detect_all, get_detector, modularity
from .slicer import SliceGraph, WindowConfig, build_slices


class EventKind(str, Enum):
    SPLIT = "split"
    MERGE = "merge"


class Classification(str, Enum):
    STRUCTURAL = "structural"
    EPHEMERAL = "ephemeral"
    NOT_AN_EVENT = "not-an-event"


@dataclass(frozen=True)
class Event:
    """
    A split or merge at window t.

    Split: trunk at t-1, branches at t. Merge: branches at t-1, trunk at t.
    `flanks` holds the communities at t+1 that decided the classification:
    the continuations paired with each branch for a merge, the successors
    of the branches for a split.
    """

    kind: EventKind
    window: int
    classification: Classification
    trunk: CommunityRef
    branches: Tuple[CommunityRef, CommunityRef]
    trunk_members: FrozenSet[str]
    branch_members: Tuple[FrozenSet[str], FrozenSet[str]]
    flanks: Tuple[CommunityRef, ...] = ()
    forced: bool = False

    @property
    def signature(self) -> tuple:
        return (self.kind, self.window, self.trunk_members, frozenset(self.branch_members))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "window": self.window,
            "classification": self.classification.value,
            "forced": self.forced,
            "trunk": {
                **self.trunk.to_dict(),
                "size": len(self.trunk_members),
                "members": sorted(self.trunk_members),
            },
            "branches": [
                {**ref.to_dict(), "size": len(members), "members": sorted(members)}
                for ref, members in zip(self.branches, self.branch_members)
            ],
            "flanks": [ref.to_dict() for ref in self.flanks],
        }


@dataclass(frozen=True)
class LedgerEntry:
    ref: CommunityRef
    size: int
    members: FrozenSet[str]

    def to_dict(self) -> dict:
        return {**self.ref.to_dict(), "size": self.size}


@dataclass
class EventLedger:
    """
    Communities resulting from classified events.

    u_s: branches of structural splits, u_m: trunks of structural merges,
    u_r: branches of ephemeral splits, u_x: trunks of ephemeral merges.
    Ephemeral entries keep their pre-correction sizes. A community enters
    at most one set.
    """

    u_s: List[LedgerEntry] = field(default_factory=list)
    u_m: List[LedgerEntry] = field(default_factory=list)
    u_r: List[LedgerEntry] = field(default_factory=list)
    u_x: List[LedgerEntry] = field(default_factory=list)

    def add(self, bucket: str, entry: LedgerEntry) -> bool:
        if any(entry in getattr(self, name) for name in ("u_s", "u_m", "u_r", "u_x")):
            return False
        getattr(self, bucket).append(entry)
        return True

    @property
    def structural_size(self) -> int:
        return sum(entry.size for entry in self.u_s + self.u_m)

    @property
    def ephemeral_size(self) -> int:
        return sum(entry.size for entry in self.u_r + self.u_x)

    def is_empty(self) -> bool:
        return not (self.u_s or self.u_m or self.u_r or self.u_x)

    def to_dict(self) -> dict:
        return {
            name: [entry.to_dict() for entry in getattr(self, name)]
            for name in ("u_s", "u_m", "u_r", "u_x")
        }


@dataclass(frozen=True)
class CorrectionMemo:
    """Outputs of past corrections per window, and events forced to structural."""

    resplit_outputs: Dict[int, FrozenSet[FrozenSet[str]]] = field(default_factory=dict)
    remerge_outputs: Dict[int, FrozenSet[FrozenSet[str]]] = field(default_factory=dict)
    forced: FrozenSet[tuple] = frozenset()

    def blocks(self, event: Event) -> bool:
        # No resplit of a remerge output, no remerge of a resplit output, at the same window
        if event.kind is EventKind.MERGE:
            return event.trunk_members in self.remerge_outputs.get(event.window, frozenset())
        produced = self.resplit_outputs.get(event.window, frozenset())
        return any(members in produced for members in event.branch_members)

    def settle(self, event: Event) -> Event:
        """The event as the correction loop treats it: a forced or blocked ephemeral event stays structural."""
        if event.classification is not Classification.EPHEMERAL:
            return event
        if event.signature in self.forced or self.blocks(event):
            return replace(event, classification=Classification.STRUCTURAL, forced=True)
        return event


@dataclass
class Description:
    """One seed's corrected account of the network's evolution."""

    seed: int
    slices: Tuple[SliceGraph, ...]
    initial_partitions: Tuple[Partition, ...]
    partitions: Tuple[Partition, ...]
    links: TemporalLinks
    ledger: EventLedger
    events: Tuple[Event, ...]
    complexity: float
    iterations: int = 0
    corrections: int = 0
    resolution: float = 1.0
    memo: CorrectionMemo = field(default_factory=CorrectionMemo)

    def community_sizes(self) -> Dict[CommunityRef, int]:
        return {
            CommunityRef(partition.window, cid): len(members)
            for partition in self.partitions
            for cid, members in partition.communities.items()
        }

    def members(self, ref: CommunityRef) -> FrozenSet[str]:
        return self.partition(ref.window).members(ref.cid)

    def partition(self, window: int) -> Partition:
        for partition in self.partitions:
            if partition.window == window:
                return partition
        raise KeyError(f"no partition for window {window}")

    def structural_events(self) -> List[Event]:
        return [event for event in self.events if event.classification is Classification.STRUCTURAL]

    def ephemeral_events(self) -> List[Event]:
        return [event for event in self.events if event.classification is Classification.EPHEMERAL]

    def modularities(self, initial: bool = False) -> List[float]:
        partitions = self.initial_partitions if initial else self.partitions
        return [
            modularity(graph, partition, self.resolution)
            for graph, partition in zip(self.slices, partitions)
        ]

    def mean_modularity(self, initial: bool = False) -> float:
        values = self.modularities(initial)
        return float(np.mean(values)) if values else 0.0

    def corrected_article_share(self) -> float:
        """Share of the description's distinct articles that sat in a corrected community."""
        articles = set().union(*(partition.nodes for partition in self.partitions))
        if not articles:
            return 0.0
        touched = set().union(*(entry.members for entry in self.ledger.u_r + self.ledger.u_x))
        return len(touched & articles) / len(articles)

    def summary(self) -> dict:
        counts = Counter((event.kind.value, event.classification.value) for event in self.events)
        return {
            "seed": self.seed,
            "complexity": self.complexity,
            "corrected_article_share": self.corrected_article_share(),
            "mean_initial_modularity": self.mean_modularity(initial=True),
            "mean_final_modularity": self.mean_modularity(),
            "iterations": self.iterations,
            "corrections": self.corrections,
            "windows": len(self.partitions),
            "communities": sum(len(p.communities) for p in self.partitions),
            "events": {f"{kind}_{cls}": n for (kind, cls), n in sorted(counts.items())},
        }

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "complexity": self.complexity,
            "iterations": self.iterations,
            "corrections": self.corrections,
            "windows": [
                {
                    "index": graph.window.index,
                    "start_year": graph.window.start_year,
                    "end_year": graph.window.end_year,
                }
                for graph in self.slices
            ],
            "initial_partitions": [partition.to_dict() for partition in self.initial_partitions],
            "partitions": [partition.to_dict() for partition in self.partitions],
            "links": self.links.to_list(),
            "ledger": self.ledger.to_dict(),
        }


def _by_size(links: TemporalLinks, refs: Iterable[CommunityRef]) -> List[CommunityRef]:
    return sorted(refs, key=lambda ref: (-links.sizes[ref], ref.cid))


def _merge_pattern(merged: CommunityRef, links: TemporalLinks):
    predecessors = _by_size(links, links.incoming(merged, SUCCESSOR))
    if len(predecessors) < 2:
        return None
    p_a, p_b = predecessors[:2]

    continuations = sorted(
        links.incoming(merged, PREDECESSOR),
        key=lambda ref: (-links.link(ref, PREDECESSOR).similarity, -links.sizes[ref], ref.cid),
    )[:2]

    g_a, g_b = links.grandchild(p_a), links.grandchild(p_b)
    if g_a is not None and g_b is not None and g_a != g_b and g_a in continuations and g_b in continuations:
        return (p_a, p_b), (g_a, g_b), Classification.EPHEMERAL
    return (p_a, p_b), tuple(continuations), Classification.STRUCTURAL


def _split_pattern(trunk: CommunityRef, links: TemporalLinks):
    children = _by_size(links, links.incoming(trunk, PREDECESSOR))
    if len(children) < 2:
        return None
    a, b = children[:2]

    s_a, s_b = links.successor(a), links.successor(b)
    if s_a is not None and s_a == s_b and links.grandchild(trunk) == s_a:
        return (a, b), (s_a,), Classification.EPHEMERAL
    flanks = tuple(ref for ref in (s_a, s_b) if ref is not None)
    return (a, b), flanks, Classification.STRUCTURAL


def classify_merge(merged: CommunityRef, links: TemporalLinks) -> Classification:
    """
    Classify the community `merged` at t as a merge.

    It is a merge when at least two communities at t-1 have it as their
    successor. With P_a, P_b the two largest of them, the merge is
    ephemeral when their grandchildren exist, differ, and are both among
    the two strongest continuations of `merged` at t+1. Any missing link
    makes it structural.
    """
    pattern = _merge_pattern(merged, links)
    return pattern[2] if pattern else Classification.NOT_AN_EVENT


def classify_split(trunk: CommunityRef, links: TemporalLinks) -> Classification:
    """
    Classify the community `trunk` at t-1 as a split.

    It is a split when at least two communities at t have it as their
    predecessor. With A, B the two largest, the split is ephemeral when A
    and B share their successor S at t+1 and S is the trunk's grandchild.
    """
    pattern = _split_pattern(trunk, links)
    return pattern[2] if pattern else Classification.NOT_AN_EVENT


def inspect_merge(
    merged: CommunityRef, links: TemporalLinks, partitions: Dict[int, Partition]
) -> Optional[Event]:
    pattern = _merge_pattern(merged, links)
    if pattern is None:
        return None
    branches, flanks, classification = pattern
    return Event(
        kind=EventKind.MERGE,
        window=merged.window,
        classification=classification,
        trunk=merged,
        branches=branches,
        trunk_members=partitions[merged.window].members(merged.cid),
        branch_members=tuple(partitions[ref.window].members(ref.cid) for ref in branches),
        flanks=flanks,
    )


def inspect_split(
    trunk: CommunityRef, links: TemporalLinks, partitions: Dict[int, Partition]
) -> Optional[Event]:
    pattern = _split_pattern(trunk, links)
    if pattern is None:
        return None
    branches, flanks, classification = pattern
    return Event(
        kind=EventKind.SPLIT,
        window=trunk.window + 1,
        classification=classification,
        trunk=trunk,
        branches=branches,
        trunk_members=partitions[trunk.window].members(trunk.cid),
        branch_members=tuple(partitions[ref.window].members(ref.cid) for ref in branches),
        flanks=flanks,
    )


def scan_events(
    partitions: Sequence[Partition],
    links: TemporalLinks,
    memo: Optional[CorrectionMemo] = None,
) -> List[Event]:
    """
    Classify every split and merge candidate, in ascending window order.

    Within a window, merges come before splits and candidates follow
    community id order. With a correction memo, ephemeral events that the
    memo forbids correcting are reported as forced structural events.
    """
    by_window = {partition.window: partition for partition in partitions}
    events: List[Event] = []
    for window in sorted(by_window):
        for cid in by_window[window].communities:
            event = inspect_merge(CommunityRef(window, cid), links, by_window)
            if event is not None:
                events.append(event)
        if window - 1 in by_window:
            for cid in by_window[window - 1].communities:
                event = inspect_split(CommunityRef(window - 1, cid), links, by_window)
                if event is not None:
                    events.append(event)
    if memo is not None:
        events = [memo.settle(event) for event in events]
    return events


def resplit(
    merged: FrozenSet[str],
    p_a: FrozenSet[str],
    s_a: FrozenSet[str],
    p_b: FrozenSet[str],
    s_b: FrozenSet[str],
    graph: SliceGraph,
    rng: np.random.Generator,
) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """
    Split an unduly merged community back along its two streams.

    Members found only around stream a (P_a ∪ S_a) go to the first output,
    members found only around stream b to the second. Members found around
    both are assigned at random. Members found around neither go to the
    side they have more edge weight to, ties at random.

    Args:
        merged: Members of the merged community C0
        p_a, s_a: Members of stream a's predecessor and continuation
        p_b, s_b: Members of stream b's predecessor and continuation
        graph: Slice graph of the merged community's window
        rng: Random generator for ambiguous members

    Returns:
        (C01, C02), a partition of `merged`

    Raises:
        CorrectionAbortedError: If either output would be empty
    """
    u_a, u_b = p_a | s_a, p_b | s_b
    first: Set[str] = set()
    second: Set[str] = set()
    shared: List[str] = []
    unplaced: List[str] = []

    for node in sorted(merged):
        in_a, in_b = node in u_a, node in u_b
        if in_a and not in_b:
            first.add(node)
        elif in_b and not in_a:
            second.add(node)
        elif in_a and in_b:
            shared.append(node)
        else:
            unplaced.append(node)

    for node in shared:
        (first if rng.random() < 0.5 else second).add(node)

    if unplaced:
        neighbours: Dict[str, Dict[str, float]] = {}
        for edge in graph.edges:
            if edge.a in merged and edge.b in merged:
                neighbours.setdefault(edge.a, {})[edge.b] = edge.weight
                neighbours.setdefault(edge.b, {})[edge.a] = edge.weight

        for node in unplaced:
            around = neighbours.get(node, {})
            to_first = sum(weight for other, weight in around.items() if other in first)
            to_second = sum(weight for other, weight in around.items() if other in second)
            if to_first > to_second:
                first.add(node)
            elif to_second > to_first:
                second.add(node)
            else:
                (first if rng.random() < 0.5 else second).add(node)

    if not first or not second:
        raise CorrectionAbortedError(
            f"resplit of {len(merged)} members leaves one side empty ({len(first)}/{len(second)})"
        )
    return frozenset(first), frozenset(second)


def remerge(a: FrozenSet[str], b: FrozenSet[str]) -> FrozenSet[str]:
    """Union of two unduly split branches."""
    return frozenset(a) | frozenset(b)


def complexity_score(ledger: EventLedger, sizes: Iterable[int]) -> float:
    """
    Complexity score of a description.

    (sum of sizes in u_s and u_m - sum of sizes in u_r and u_x) divided by
    the summed sizes of every community of the description.

    Args:
        ledger: Event ledger
        sizes: Member counts of all communities across all windows

    Returns:
        Complexity score

    Raises:
        UndefinedInputError: If the total size is zero
    """
    total = sum(sizes)
    if total == 0:
        raise UndefinedInputError("complexity score undefined: description has no members")
    return (ledger.structural_size - ledger.ephemeral_size) / total


class Denoiser:
    """
    Fixed-point correction of ephemeral events.

    Each pass classifies every candidate in ascending window order,
    corrects the earliest ephemeral event, and recomputes the links.
    """

    def __init__(
        self,
        slices: Sequence[SliceGraph],
        similarity: Optional[Similarity] = None,
        link_threshold: float = 0.0,
        max_iterations: Optional[int] = None,
        resolution: float = 1.0,
    ):
        self.slices = {graph.window.index: graph for graph in slices}
        self.similarity = similarity or jaccard
        self.link_threshold = link_threshold
        self.max_iterations = max_iterations or 10 * max(1, len(self.slices))
        self.resolution = resolution

        self._resplit_outputs: Dict[int, Set[FrozenSet[str]]] = {}
        self._remerge_outputs: Dict[int, Set[FrozenSet[str]]] = {}
        self._forced: Set[tuple] = set()

    def _link(self, partitions: Sequence[Partition]) -> TemporalLinks:
        return link_all(partitions, self.similarity, self.link_threshold)

    def _memo(self) -> CorrectionMemo:
        return CorrectionMemo(
            resplit_outputs={w: frozenset(s) for w, s in self._resplit_outputs.items()},
            remerge_outputs={w: frozenset(s) for w, s in self._remerge_outputs.items()},
            forced=frozenset(self._forced),
        )

    def _effective(self, event: Event, memo: CorrectionMemo) -> Event:
        settled = memo.settle(event)
        if settled is not event and event.signature not in memo.forced:
            logger.warning(
                f"window {event.window}: ephemeral {event.kind.value} would undo an earlier "
                f"correction; keeping it as structural"
            )
            self._forced.add(event.signature)
        return settled

    def _correct(self, event: Event, partition: Partition, rng: np.random.Generator) -> Partition:
        if event.kind is EventKind.MERGE:
            p_a, p_b = event.branch_members
            s_a, s_b = (self._members(ref) for ref in event.flanks)
            c01, c02 = resplit(
                event.trunk_members, p_a, s_a, p_b, s_b, self.slices[event.window], rng
            )
            self._resplit_outputs.setdefault(event.window, set()).update({c01, c02})
            logger.debug(
                f"window {event.window}: resplit {len(event.trunk_members)} members into "
                f"{len(c01)} + {len(c02)}"
            )
            return partition.replace([event.trunk.cid], [c01, c02])

        merged = remerge(*event.branch_members)
        self._remerge_outputs.setdefault(event.window, set()).add(merged)
        logger.debug(f"window {event.window}: remerged branches into {len(merged)} members")
        return partition.replace([ref.cid for ref in event.branches], [merged])

    def _members(self, ref: CommunityRef) -> FrozenSet[str]:
        return self._current[ref.window].members(ref.cid)

    def run(
        self,
        partitions: Sequence[Partition],
        rng: np.random.Generator,
        seed: int = 0,
        links: Optional[TemporalLinks] = None,
    ) -> Description:
        """
        Correct ephemeral events until none is left.

        Args:
            partitions: Initial partitions, one per slice
            rng: Random generator for ambiguous resplit members
            seed: Seed recorded in the description
            links: Links of the initial partitions (computed when omitted)

        Returns:
            Description at the fixed point

        Raises:
            NonConvergenceError: If the iteration cap is exceeded
        """
        initial = tuple(partitions)
        self._current = {partition.window: partition for partition in partitions}
        links = links if links is not None else self._link(initial)
        ledger = EventLedger()
        corrected: List[Event] = []
        corrected_windows: Counter = Counter()
        iterations = 0

        while True:
            memo = self._memo()
            events = [self._effective(event, memo) for event in scan_events(self._ordered(), links)]
            target = next((e for e in events if e.classification is Classification.EPHEMERAL), None)
            if target is None:
                break

            iterations += 1
            if iterations > self.max_iterations:
                oscillating = [w for w, n in corrected_windows.items() if n > 1] or list(corrected_windows)
                logger.error(f"Denoising exceeded {self.max_iterations} iterations")
                raise NonConvergenceError(self.max_iterations, oscillating)

            try:
                updated = self._correct(target, self._current[target.window], rng)
            except CorrectionAbortedError as e:
                logger.warning(f"window {target.window}: {e}; keeping the merge as structural")
                self._forced.add(target.signature)
                continue

            if target.kind is EventKind.MERGE:
                ledger.add("u_x", LedgerEntry(target.trunk, len(target.trunk_members), target.trunk_members))
            else:
                for ref, members in zip(target.branches, target.branch_members):
                    ledger.add("u_r", LedgerEntry(ref, len(members), members))

            corrected.append(target)
            corrected_windows[target.window] += 1
            self._current[target.window] = updated
            links = self._link(self._ordered())

        final = self._ordered()
        structural = [event for event in events if event.classification is Classification.STRUCTURAL]
        for event in structural:
            if event.kind is EventKind.SPLIT:
                for ref, members in zip(event.branches, event.branch_members):
                    ledger.add("u_s", LedgerEntry(ref, len(members), members))
            else:
                ledger.add("u_m", LedgerEntry(event.trunk, len(event.trunk_members), event.trunk_members))

        sizes = [len(members) for partition in final for members in partition.communities.values()]
        if sum(sizes) == 0:
            complexity = 0.0
        else:
            raw = complexity_score(ledger, sizes)
            complexity = float(np.clip(raw, -1.0, 1.0))
            if complexity != raw:
                logger.warning(f"seed {seed}: complexity {raw:.4f} clipped to {complexity:.4f}")

        return Description(
            seed=seed,
            slices=tuple(self.slices[partition.window] for partition in final),
            initial_partitions=initial,
            partitions=tuple(final),
            links=links,
            ledger=ledger,
            events=tuple(corrected + structural),
            complexity=complexity,
            iterations=iterations,
            corrections=len(corrected),
            resolution=self.resolution,
            memo=self._memo(),
        )

    def _ordered(self) -> List[Partition]:
        return [self._current[window] for window in sorted(self._current)]


def denoise_fixpoint(
    partitions: Sequence[Partition],
    links: Optional[TemporalLinks],
    slices: Sequence[SliceGraph],
    rng: np.random.Generator,
    seed: int = 0,
    similarity: Optional[Similarity] = None,
    link_threshold: float = 0.0,
    max_iterations: Optional[int] = None,
    resolution: float = 1.0,
) -> Description:
    """Run the correction loop on one set of initial partitions (see Denoiser)."""
    denoiser = Denoiser(
        slices,
        similarity=similarity,
        link_threshold=link_threshold,
        max_iterations=max_iterations,
        resolution=resolution,
    )
    return denoiser.run(partitions, rng, seed=seed, links=links)


def pending_corrections(description: Description) -> List[Event]:
    """
    Ephemeral events a further pass would still correct; empty at a fixed point.

    The re-scan applies the description's memo, so events the loop forced to
    structural are not reported even though the raw rule calls them ephemeral.
    """
    events = scan_events(description.partitions, description.links, description.memo)
    return [event for event in events if event.classification is Classification.EPHEMERAL]


def describe_seed(
    slices: Sequence[SliceGraph],
    config: PipelineConfig,
    seed: int,
    detector: Optional[CommunityDetector] = None,
) -> Description:
    """Detect, link and denoise with one master seed."""
    detector = detector or get_detector(config.detector, config.resolution)
    similarity = get_similarity(config.similarity)
    partitions = detect_all(slices, seed, detector)
    links = link_all(partitions, similarity, config.link_threshold)
    description = denoise_fixpoint(
        partitions,
        links,
        slices,
        np.random.default_rng(seed),
        seed=seed,
        similarity=similarity,
        link_threshold=config.link_threshold,
        max_iterations=config.max_iterations,
        resolution=config.resolution,
    )
    logger.info(
        f"seed {seed}: complexity={description.complexity:.4f}, "
        f"Q {description.mean_modularity(initial=True):.4f} -> {description.mean_modularity():.4f}, "
        f"{description.corrections} corrections, {len(description.structural_events())} structural events"
    )
    return description


def describe_seeds(
    slices: Sequence[SliceGraph],
    config: PipelineConfig,
    master_seeds: Sequence[int],
) -> List[Description]:
    """One description per master seed, in seed order."""
    detector = get_detector(config.detector, config.resolution)
    return [describe_seed(slices, config, seed, detector) for seed in master_seeds]


def pick_best(descriptions: Sequence[Description]) -> Description:
    """Highest complexity; ties go to higher mean final modularity, then the lower seed."""
    if not descriptions:
        raise ValueError("no descriptions to choose from")
    return max(
        descriptions,
        key=lambda d: (d.complexity, d.mean_modularity(), -d.seed),
    )


def select_best_description(
    corpus: Sequence[ArticleRecord],
    config: PipelineConfig,
    master_seeds: Sequence[int],
) -> Description:
    """
    Run the full detection-to-denoising chain per seed and keep the best.

    Args:
        corpus: Article records
        config: Pipeline settings
        master_seeds: At least one master seed

    Returns:
        The description with the highest complexity score
    """
    if not master_seeds:
        raise ValueError("at least one master seed is required")

    slices = build_slices(
        corpus, WindowConfig(config.window, config.step), config.min_shared_refs, config.binarize
    )
    best = pick_best(describe_seeds(slices, config, master_seeds))
    logger.info(f"Selected seed {best.seed} (complexity={best.complexity:.4f}) out of {len(master_seeds)}")
    return best
