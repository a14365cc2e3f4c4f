"""
Laminar Streams for Streamflow

Chains the communities of a corrected description into laminar streams
(successions of communities connected by both t+/-1 and t+/-2 links),
labels them, lays them out as an alluvial diagram and reports the
modularity series.
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from loguru import logger

from .denoise import Description, EventKind
from .ingest import ArticleRecord
from .linker import CommunityRef
from .slicer import Window


@dataclass(frozen=True)
class StreamLabel:
    main_author: Optional[str]
    start_year: int
    end_year: int

    def to_dict(self) -> dict:
        return {
            "main_author": self.main_author,
            "start_year": self.start_year,
            "end_year": self.end_year,
        }


@dataclass(frozen=True)
class Stream:
    """A succession of communities, one per consecutive window."""

    id: int
    members: Tuple[CommunityRef, ...]
    label: Optional[StreamLabel] = None

    @property
    def first(self) -> CommunityRef:
        return self.members[0]

    @property
    def last(self) -> CommunityRef:
        return self.members[-1]

    def windows(self) -> List[int]:
        return [ref.window for ref in self.members]

    def articles(self, description: Description) -> Set[str]:
        return set().union(*(description.members(ref) for ref in self.members))


@dataclass(frozen=True)
class ModularityPoint:
    window: int
    start_year: int
    end_year: int
    initial_q: float
    final_q: float


@dataclass(frozen=True)
class LayoutNode:
    stream: int
    ref: CommunityRef
    x: int
    y: int
    size: int


@dataclass(frozen=True)
class Ribbon:
    """Band between two communities; `kind` is flow, split or merge."""

    kind: str
    source: CommunityRef
    target: CommunityRef
    width: int


@dataclass
class AlluvialLayout:
    lanes: Dict[int, int] = field(default_factory=dict)
    nodes: List[LayoutNode] = field(default_factory=list)
    ribbons: List[Ribbon] = field(default_factory=list)

    @property
    def lane_count(self) -> int:
        return len(set(self.lanes.values()))


def _windows(description: Description) -> Dict[int, Window]:
    return {graph.window.index: graph.window for graph in description.slices}


def _junction_edges(description: Description) -> Set[Tuple[CommunityRef, CommunityRef]]:
    cuts = set()
    for event in description.structural_events():
        if event.kind is EventKind.SPLIT:
            cuts.update((event.trunk, branch) for branch in event.branches)
        else:
            cuts.update((branch, event.trunk) for branch in event.branches)
    return cuts


def _mutual_chains(description: Description) -> List[List[CommunityRef]]:
    links = description.links
    cuts = _junction_edges(description)

    following: Dict[CommunityRef, CommunityRef] = {}
    preceded: Set[CommunityRef] = set()
    for ref in links.refs():
        nxt = links.successor(ref)
        if nxt is None or nxt.window != ref.window + 1:
            continue
        if links.predecessor(nxt) != ref or (ref, nxt) in cuts:
            continue
        following[ref] = nxt
        preceded.add(nxt)

    chains = []
    for ref in links.refs():
        if ref in preceded:
            continue
        chain = [ref]
        while chain[-1] in following:
            chain.append(following[chain[-1]])
        chains.append(chain)
    return chains


def _split_inconsistent(chain: List[CommunityRef], description: Description) -> List[List[CommunityRef]]:
    # A +2 or -2 link landing on a different community of the same chain breaks it
    links = description.links
    for i, ref in enumerate(chain):
        grandchild = links.grandchild(ref)
        if grandchild is not None and i + 2 < len(chain) and chain[i + 2] != grandchild:
            return [chain[: i + 2], chain[i + 2 :]]
        ancestor = links.ancestor(ref)
        if ancestor is not None and i - 2 >= 0 and chain[i - 2] != ancestor:
            return [chain[: i - 1], chain[i - 1 :]]
    return [chain]


def extract_streams(description: Description) -> List[Stream]:
    """
    Maximal laminar streams of a description.

    Adjacent communities join a stream when each is the other's t+/-1 link,
    unless the pair is the junction of a structural split or merge. Chains
    are then cut wherever an existing t+/-2 link of a member lands on
    another community of the same chain. Every community ends up in exactly
    one stream; streams are numbered by first window, then community id.

    Args:
        description: Corrected description

    Returns:
        Streams ordered by id
    """
    pending = _mutual_chains(description)
    chains: List[List[CommunityRef]] = []
    while pending:
        chain = pending.pop()
        parts = _split_inconsistent(chain, description)
        if len(parts) == 1:
            chains.append(chain)
        else:
            pending.extend(parts)

    chains.sort(key=lambda chain: chain[0])
    streams = [Stream(id=i, members=tuple(chain)) for i, chain in enumerate(chains)]
    logger.info(f"Extracted {len(streams)} streams from {len(description.links.refs())} communities")
    return streams


def label_stream(
    stream: Stream,
    description: Description,
    articles: Mapping[str, ArticleRecord],
) -> StreamLabel:
    """
    Main author and covered years of a stream.

    The main author has the most distinct articles in the stream; ties go
    to the lexicographically first author. Years run from the first
    window's start to the last window's end.
    """
    counts = Counter(
        author
        for article_id in sorted(stream.articles(description))
        if article_id in articles
        for author in set(articles[article_id].authors)
    )
    main_author = min(counts, key=lambda author: (-counts[author], author)) if counts else None

    windows = _windows(description)
    return StreamLabel(
        main_author=main_author,
        start_year=windows[stream.first.window].start_year,
        end_year=windows[stream.last.window].end_year,
    )


def label_streams(
    streams: Sequence[Stream],
    description: Description,
    articles: Sequence[ArticleRecord],
) -> List[Stream]:
    by_id = {article.id: article for article in articles}
    return [replace(stream, label=label_stream(stream, description, by_id)) for stream in streams]


def stream_index(streams: Sequence[Stream]) -> Dict[CommunityRef, int]:
    """Stream id of every community."""
    return {ref: stream.id for stream in streams for ref in stream.members}


def modularity_series(description: Description) -> List[ModularityPoint]:
    """Initial and final modularity of every window, on the same slice graphs."""
    initial = description.modularities(initial=True)
    final = description.modularities()
    return [
        ModularityPoint(graph.window.index, graph.window.start_year, graph.window.end_year, q0, q1)
        for graph, q0, q1 in zip(description.slices, initial, final)
    ]


def _junction_ribbons(description: Description) -> List[Ribbon]:
    ribbons = []
    for event in description.structural_events():
        if event.kind is EventKind.SPLIT:
            for branch, members in zip(event.branches, event.branch_members):
                ribbons.append(Ribbon("split", event.trunk, branch, len(members)))
        else:
            for branch, members in zip(event.branches, event.branch_members):
                ribbons.append(Ribbon("merge", branch, event.trunk, len(members)))
    return ribbons


def layout_alluvial(streams: Sequence[Stream], description: Description) -> AlluvialLayout:
    """
    Place streams on horizontal lanes.

    Streams are placed by birth window, then size (largest first). Each
    takes the free lane closest to the lane of the stream it descends
    from; a lane is free once its previous stream has ended. Community
    nodes sit at x = window start year, y = lane.

    Args:
        streams: Streams of the description
        description: Corrected description

    Returns:
        AlluvialLayout
    """
    layout = AlluvialLayout()
    if not streams:
        return layout

    windows = _windows(description)
    owner = stream_index(streams)
    junctions = _junction_ribbons(description)

    by_id = {stream.id: stream for stream in streams}
    parent: Dict[int, int] = {}
    for ribbon in junctions:
        child = owner.get(ribbon.target)
        if child is None or ribbon.source not in owner or child in parent:
            continue
        if ribbon.target == by_id[child].first:
            parent[child] = owner[ribbon.source]

    sizes = {
        stream.id: sum(len(description.members(ref)) for ref in stream.members) for stream in streams
    }
    order = sorted(streams, key=lambda s: (s.first.window, -sizes[s.id], s.id))

    lane_end: List[int] = []
    for stream in order:
        free = [lane for lane, end in enumerate(lane_end) if end < stream.first.window]
        if free:
            anchor = layout.lanes.get(parent.get(stream.id), 0)
            lane = min(free, key=lambda lane: (abs(lane - anchor), lane))
            lane_end[lane] = stream.last.window
        else:
            lane = len(lane_end)
            lane_end.append(stream.last.window)
        layout.lanes[stream.id] = lane

    for stream in streams:
        y = layout.lanes[stream.id]
        for ref in stream.members:
            layout.nodes.append(
                LayoutNode(stream.id, ref, windows[ref.window].start_year, y, len(description.members(ref)))
            )
        for source, target in zip(stream.members, stream.members[1:]):
            shared = len(description.members(source) & description.members(target))
            layout.ribbons.append(Ribbon("flow", source, target, shared))

    layout.ribbons.extend(junctions)
    layout.nodes.sort(key=lambda node: (node.x, node.y, node.ref))
    layout.ribbons.sort(key=lambda ribbon: (ribbon.source, ribbon.target, ribbon.kind))
    logger.debug(f"Alluvial layout: {layout.lane_count} lanes, {len(layout.ribbons)} ribbons")
    return layout
