"""
Temporal Slicing for Streamflow

Enumerates sliding windows of w years translated by dt years, aligned to
the corpus minimum year, and materializes each window's coupling graph.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Sequence, Tuple

import networkx as nx
import numpy as np
from loguru import logger

from ..utils.errors import ConfigError
from .ingest import ArticleRecord, CouplingEdge, coupling_edges


@dataclass(frozen=True)
class WindowConfig:
    """Window width w and translation step dt, both in years."""

    w: int = 4
    dt: int = 1

    def __post_init__(self):
        if self.w < 1 or self.dt < 1:
            raise ConfigError(f"window width and step must be >= 1 (w={self.w}, dt={self.dt})")
        if self.dt > self.w:
            raise ConfigError(f"step dt={self.dt} exceeds width w={self.w}; years would be orphaned")


@dataclass(frozen=True, order=True)
class Window:
    """A window of the corpus; start_year and end_year are inclusive."""

    index: int
    start_year: int
    end_year: int

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    @property
    def label(self) -> str:
        return f"{self.start_year}-{self.end_year}"


@dataclass(frozen=True)
class SliceGraph:
    """
    Weighted coupling graph of one window. Isolated nodes are kept.

    The networkx view and the edge arrays are built once per slice and
    shared by every seed and every modularity evaluation.
    """

    window: Window
    nodes: FrozenSet[str]
    edges: Tuple[CouplingEdge, ...]

    def isolated(self) -> FrozenSet[str]:
        linked = {edge.a for edge in self.edges} | {edge.b for edge in self.edges}
        return self.nodes - linked

    @cached_property
    def ordered_nodes(self) -> Tuple[str, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Positions of both endpoints in `ordered_nodes`, and edge weights."""
        position = {node: k for k, node in enumerate(self.ordered_nodes)}
        count = len(self.edges)
        ends_a = np.fromiter((position[edge.a] for edge in self.edges), dtype=np.int64, count=count)
        ends_b = np.fromiter((position[edge.b] for edge in self.edges), dtype=np.int64, count=count)
        weights = np.fromiter((edge.weight for edge in self.edges), dtype=float, count=count)
        return ends_a, ends_b, weights

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """Undirected weighted graph with nodes and edges in canonical order. Treat as read-only."""
        graph = nx.Graph()
        graph.add_nodes_from(self.ordered_nodes)
        graph.add_weighted_edges_from((edge.a, edge.b, edge.weight) for edge in sorted(self.edges))
        return graph


def enumerate_windows(min_year: int, max_year: int, config: WindowConfig) -> List[Window]:
    """
    Enumerate windows fully inside [min_year, max_year].

    Args:
        min_year: First corpus year; the first window starts here
        max_year: Last corpus year
        config: Window width and step

    Returns:
        Windows ordered by start year (empty when the range is shorter than w)
    """
    if min_year > max_year:
        raise ValueError(f"min_year {min_year} is after max_year {max_year}")

    span = max_year - min_year + 1
    if span < config.w:
        return []

    count = (span - config.w) // config.dt + 1
    return [
        Window(index, min_year + index * config.dt, min_year + index * config.dt + config.w - 1)
        for index in range(count)
    ]


def corpus_windows(articles: Sequence[ArticleRecord], config: WindowConfig) -> List[Window]:
    """Windows for a corpus, aligned to its minimum year (empty corpus → no windows)."""
    if not articles:
        return []
    years = [article.year for article in articles]
    return enumerate_windows(min(years), max(years), config)


def slice_graph(
    articles: Sequence[ArticleRecord],
    window: Window,
    min_shared: int,
    binarize: bool = False,
) -> SliceGraph:
    """
    Build the coupling graph restricted to one window.

    Args:
        articles: Full corpus
        window: Window to materialize
        min_shared: Coupling threshold
        binarize: Use unit edge weights

    Returns:
        SliceGraph over the articles whose year lies in the window
    """
    members = [article for article in articles if window.contains(article.year)]
    edges = coupling_edges(members, min_shared, binarize=binarize)
    return SliceGraph(
        window=window,
        nodes=frozenset(article.id for article in members),
        edges=tuple(edges),
    )


def build_slices(
    articles: Sequence[ArticleRecord],
    config: WindowConfig,
    min_shared: int,
    binarize: bool = False,
) -> List[SliceGraph]:
    """Slice graphs for every window of the corpus, in window order."""
    slices = [
        slice_graph(articles, window, min_shared, binarize=binarize)
        for window in corpus_windows(articles, config)
    ]
    logger.info(
        f"Built {len(slices)} slice graphs (w={config.w}, dt={config.dt}, "
        f"min_shared={min_shared}{', binarized' if binarize else ''})"
    )
    return slices


def window_summary(slices: Sequence[SliceGraph]) -> List[Dict[str, int]]:
    """Per-window size statistics used by the `windows` command."""
    return [
        {
            "index": graph.window.index,
            "start_year": graph.window.start_year,
            "end_year": graph.window.end_year,
            "articles": len(graph.nodes),
            "edges": len(graph.edges),
            "isolated": len(graph.isolated()),
        }
        for graph in slices
    ]
