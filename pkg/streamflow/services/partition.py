"""
Community Detection for Streamflow

Partitions each slice graph by modularity maximization. Detectors are
pluggable; Louvain is the default. Results are canonically numbered so
that identical member sets always get identical community ids.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Protocol, Sequence

import networkx as nx
import numpy as np
from loguru import logger

from ..utils.errors import ConfigError, CoverageError
from .slicer import SliceGraph


@dataclass(frozen=True)
class Partition:
    """
    Assignment of one window's articles to communities.

    Community ids are dense integers from 0, ordered by size (largest
    first) and then by smallest member id.
    """

    window: int
    assignment: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_groups(cls, window: int, groups: Iterable[Iterable[str]]) -> "Partition":
        """
        Build a canonically numbered partition from member groups.

        Args:
            window: Window index
            groups: Disjoint member collections; empty groups are dropped

        Returns:
            Partition
        """
        members = [frozenset(group) for group in groups]
        members = [group for group in members if group]
        members.sort(key=lambda group: (-len(group), min(group)))

        assignment: Dict[str, int] = {}
        for cid, group in enumerate(members):
            for node in group:
                if node in assignment:
                    raise ValueError(f"node {node!r} assigned to two communities in window {window}")
                assignment[node] = cid

        return cls(window=window, assignment=dict(sorted(assignment.items())))

    @cached_property
    def communities(self) -> Dict[int, FrozenSet[str]]:
        grouped: Dict[int, set] = {}
        for node, cid in self.assignment.items():
            grouped.setdefault(cid, set()).add(node)
        return {cid: frozenset(grouped[cid]) for cid in sorted(grouped)}

    @property
    def nodes(self) -> FrozenSet[str]:
        return frozenset(self.assignment)

    def members(self, cid: int) -> FrozenSet[str]:
        return self.communities[cid]

    def size(self, cid: int) -> int:
        return len(self.communities[cid])

    def replace(self, removed: Iterable[int], added: Iterable[Iterable[str]]) -> "Partition":
        """New partition with communities `removed` replaced by `added` groups, renumbered."""
        removed = set(removed)
        kept = [members for cid, members in self.communities.items() if cid not in removed]
        return Partition.from_groups(self.window, kept + [frozenset(group) for group in added])

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "communities": {
                str(cid): sorted(members) for cid, members in self.communities.items()
            },
        }


def modularity(graph: SliceGraph, partition: Partition, resolution: float = 1.0) -> float:
    """
    Weighted Newman-Girvan modularity.

    Q = sum over communities of (L_c / m - resolution * (D_c / 2m)^2), with
    L_c the internal edge weight, D_c the total degree and m the total
    weight. An edgeless graph has Q = 0.

    Args:
        graph: Slice graph
        partition: Partition covering exactly the graph's nodes
        resolution: Resolution parameter

    Returns:
        Modularity

    Raises:
        CoverageError: If the partition and the graph disagree on nodes
    """
    missing = graph.nodes - partition.nodes
    if missing:
        raise CoverageError(
            f"window {graph.window.index}: {len(missing)} nodes unassigned, e.g. {sorted(missing)[0]!r}"
        )
    extra = partition.nodes - graph.nodes
    if extra:
        raise CoverageError(
            f"window {graph.window.index}: {len(extra)} assigned nodes not in graph, e.g. {sorted(extra)[0]!r}"
        )

    if not graph.edges:
        return 0.0

    ends_a, ends_b, weights = graph.edge_arrays
    m = weights.sum()
    if m == 0:
        return 0.0

    labels = np.fromiter(
        (partition.assignment[node] for node in graph.ordered_nodes), dtype=np.int64, count=len(graph.ordered_nodes)
    )
    labels_a, labels_b = labels[ends_a], labels[ends_b]
    inside = labels_a == labels_b

    n_communities = int(labels.max()) + 1
    internal = np.bincount(labels_a[inside], weights=weights[inside], minlength=n_communities)
    degree = np.bincount(labels_a, weights=weights, minlength=n_communities) + np.bincount(
        labels_b, weights=weights, minlength=n_communities
    )

    return float(np.sum(internal / m - resolution * (degree / (2.0 * m)) ** 2))


class CommunityDetector(Protocol):
    """Anything that partitions a slice graph deterministically given a seed."""

    name: str

    def detect(self, graph: SliceGraph, seed: int) -> Partition:
        ...


class ModularityDetector:
    """
    Base class for modularity-maximizing detectors.

    The algorithm's result is compared with the connected-components
    partition and the better modularity wins, so the result never scores
    below the single-community or all-singleton partitions.
    """

    name = "modularity"

    def __init__(self, resolution: float = 1.0):
        self.resolution = resolution

    def _communities(self, graph: nx.Graph, seed: int) -> List[set]:
        raise NotImplementedError

    def detect(self, graph: SliceGraph, seed: int) -> Partition:
        index = graph.window.index
        if not graph.nodes:
            return Partition(window=index)
        if not graph.edges:
            return Partition.from_groups(index, ([node] for node in graph.nodes))

        nx_graph = graph.nx_graph
        found = Partition.from_groups(index, self._communities(nx_graph, seed))
        components = Partition.from_groups(index, nx.connected_components(nx_graph))

        q_found = modularity(graph, found, self.resolution)
        q_components = modularity(graph, components, self.resolution)
        if q_components > q_found:
            logger.debug(
                f"window {index}: components partition beats {self.name} "
                f"({q_components:.4f} > {q_found:.4f})"
            )
            return components
        return found


class LouvainDetector(ModularityDetector):
    """Louvain greedy modularity maximization with seeded node-order shuffling."""

    name = "louvain"

    def __init__(self, resolution: float = 1.0, threshold: float = 1e-7):
        super().__init__(resolution)
        self.threshold = threshold

    def _communities(self, graph: nx.Graph, seed: int) -> List[set]:
        return nx.community.louvain_communities(
            graph, weight="weight", resolution=self.resolution, threshold=self.threshold, seed=seed
        )


class GreedyModularityDetector(ModularityDetector):
    """Clauset-Newman-Moore agglomeration; deterministic, the seed is unused."""

    name = "greedy"

    def _communities(self, graph: nx.Graph, seed: int) -> List[set]:
        return nx.community.greedy_modularity_communities(
            graph, weight="weight", resolution=self.resolution
        )


DETECTORS = {
    LouvainDetector.name: LouvainDetector,
    GreedyModularityDetector.name: GreedyModularityDetector,
}


def get_detector(name: str = "louvain", resolution: float = 1.0) -> CommunityDetector:
    """
    Look up a detector by name.

    Raises:
        ConfigError: If the name is not registered
    """
    try:
        return DETECTORS[name](resolution=resolution)
    except KeyError:
        raise ConfigError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None


def window_seed(master_seed: int, window_index: int) -> int:
    """Per-window seed derived from the master seed, independent of processing order."""
    return int(np.random.SeedSequence([master_seed, window_index]).generate_state(1)[0])


def detect(graph: SliceGraph, seed: int, detector: Optional[CommunityDetector] = None) -> Partition:
    """Partition one slice graph (Louvain by default)."""
    detector = detector or LouvainDetector()
    return detector.detect(graph, seed)


def detect_all(
    slices: Sequence[SliceGraph],
    seed: int,
    detector: Optional[CommunityDetector] = None,
) -> List[Partition]:
    """
    Partition every window with seeds derived from one master seed.

    Args:
        slices: Slice graphs in window order
        seed: Master seed
        detector: Detector to use (Louvain by default)

    Returns:
        Partitions in window order
    """
    detector = detector or LouvainDetector()
    partitions = [detect(graph, window_seed(seed, graph.window.index), detector) for graph in slices]
    logger.debug(
        f"seed {seed}: {sum(len(p.communities) for p in partitions)} communities "
        f"over {len(partitions)} windows ({detector.name})"
    )
    return partitions
