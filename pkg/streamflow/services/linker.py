"""
Temporal Linking for Streamflow

Compares every community with the communities two and one windows
before and after it, and keeps only the single most similar one at each
offset: its ancestor (t-2), predecessor (t-1), successor (t+1) and
grandchild (t+2).
"""

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from ..utils.errors import ConfigError
from .partition import Partition

ANCESTOR, PREDECESSOR, SUCCESSOR, GRANDCHILD = -2, -1, 1, 2
OFFSETS = (ANCESTOR, PREDECESSOR, SUCCESSOR, GRANDCHILD)
OFFSET_NAMES = {
    ANCESTOR: "ancestor",
    PREDECESSOR: "predecessor",
    SUCCESSOR: "successor",
    GRANDCHILD: "grandchild",
}

Similarity = Callable[[FrozenSet[str], FrozenSet[str]], float]


@dataclass(frozen=True, order=True)
class CommunityRef:
    """A community `cid` of window `window`."""

    window: int
    cid: int

    def to_dict(self) -> dict:
        return {"window": self.window, "cid": self.cid}

    def __str__(self) -> str:
        return f"w{self.window}c{self.cid}"


@dataclass(frozen=True)
class Link:
    target: CommunityRef
    similarity: float


def jaccard(a: FrozenSet[str], b: FrozenSet[str]) -> float:
    """|A∩B| / |A∪B|, and 0 when both sets are empty."""
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def overlap(a: FrozenSet[str], b: FrozenSet[str]) -> float:
    """|A∩B| / min(|A|, |B|), and 0 when either set is empty."""
    smaller = min(len(a), len(b))
    if smaller == 0:
        return 0.0
    return len(a & b) / smaller


SIMILARITIES: Dict[str, Similarity] = {
    "jaccard": jaccard,
    "overlap": overlap,
}


def get_similarity(name: str = "jaccard") -> Similarity:
    try:
        return SIMILARITIES[name]
    except KeyError:
        raise ConfigError(f"unknown similarity {name!r}; choose from {sorted(SIMILARITIES)}") from None


class TemporalLinks:
    """
    Best-match links of every community at offsets -2, -1, +1 and +2.

    Links are directional: A's successor may be B while B's predecessor is
    some other community. Reverse lookups answer "which communities point
    at this one at a given offset".
    """

    def __init__(
        self,
        links: Dict[CommunityRef, Dict[int, Link]],
        sizes: Dict[CommunityRef, int],
    ):
        self._links = links
        self.sizes = sizes
        self._incoming: Dict[Tuple[CommunityRef, int], List[CommunityRef]] = {}
        for source in sorted(links):
            for offset, link in sorted(links[source].items()):
                self._incoming.setdefault((link.target, offset), []).append(source)

    def refs(self) -> List[CommunityRef]:
        return sorted(self.sizes)

    def windows(self) -> List[int]:
        return sorted({ref.window for ref in self.sizes})

    def link(self, ref: CommunityRef, offset: int) -> Optional[Link]:
        return self._links.get(ref, {}).get(offset)

    def target(self, ref: CommunityRef, offset: int) -> Optional[CommunityRef]:
        link = self.link(ref, offset)
        return link.target if link else None

    def ancestor(self, ref: CommunityRef) -> Optional[CommunityRef]:
        return self.target(ref, ANCESTOR)

    def predecessor(self, ref: CommunityRef) -> Optional[CommunityRef]:
        return self.target(ref, PREDECESSOR)

    def successor(self, ref: CommunityRef) -> Optional[CommunityRef]:
        return self.target(ref, SUCCESSOR)

    def grandchild(self, ref: CommunityRef) -> Optional[CommunityRef]:
        return self.target(ref, GRANDCHILD)

    def incoming(self, ref: CommunityRef, offset: int) -> List[CommunityRef]:
        """Communities whose link at `offset` points to `ref`."""
        return list(self._incoming.get((ref, offset), []))

    def __iter__(self) -> Iterator[Tuple[CommunityRef, int, Link]]:
        for source in sorted(self._links):
            for offset, link in sorted(self._links[source].items()):
                yield source, offset, link

    def __len__(self) -> int:
        return sum(len(by_offset) for by_offset in self._links.values())

    def to_list(self) -> List[dict]:
        return [
            {
                "source": source.to_dict(),
                "relation": OFFSET_NAMES[offset],
                "offset": offset,
                "target": link.target.to_dict(),
                "similarity": link.similarity,
            }
            for source, offset, link in self
        ]


def _best_match(
    members: FrozenSet[str],
    target: Partition,
    similarity: Similarity,
) -> Optional[Tuple[int, float]]:
    # Only communities sharing at least one article are candidates
    shared = Counter(target.assignment[node] for node in members if node in target.assignment)
    best: Optional[Tuple[float, int, int]] = None
    for cid in shared:
        score = similarity(members, target.members(cid))
        key = (score, target.size(cid), -cid)
        if best is None or key > best:
            best = key
    if best is None:
        return None
    return -best[2], best[0]


def link_all(
    partitions: Sequence[Partition],
    similarity: Optional[Similarity] = None,
    link_threshold: float = 0.0,
) -> TemporalLinks:
    """
    Compute every community's ancestor, predecessor, successor and grandchild.

    Ties on similarity go to the larger community, then the smaller id. A
    link is recorded only when its similarity is positive and at least
    link_threshold; windows outside the sequence simply have no links.

    Args:
        partitions: Partitions, one per window index
        similarity: Set similarity measure (Jaccard by default)
        link_threshold: Minimum similarity for a link

    Returns:
        TemporalLinks
    """
    similarity = similarity or jaccard
    by_window = {partition.window: partition for partition in partitions}

    links: Dict[CommunityRef, Dict[int, Link]] = {}
    sizes: Dict[CommunityRef, int] = {}

    for window, partition in sorted(by_window.items()):
        for cid, members in partition.communities.items():
            ref = CommunityRef(window, cid)
            sizes[ref] = len(members)
            for offset in OFFSETS:
                target = by_window.get(window + offset)
                if target is None:
                    continue
                match = _best_match(members, target, similarity)
                if match is None:
                    continue
                target_cid, score = match
                if score > 0 and score >= link_threshold:
                    links.setdefault(ref, {})[offset] = Link(CommunityRef(window + offset, target_cid), score)

    result = TemporalLinks(links, sizes)
    logger.debug(f"Linked {len(sizes)} communities with {len(result)} links")
    return result
