"""
Shared fixtures and builders for the Streamflow test suite.
"""

import itertools
from typing import Dict, Iterable, List, Sequence, Tuple

import pytest
from loguru import logger

from streamflow.services.ingest import ArticleRecord, CouplingEdge
from streamflow.services.partition import Partition
from streamflow.services.slicer import SliceGraph, Window


def article(article_id: str, year: int, refs: Iterable[str], authors: Sequence[str] = ()) -> ArticleRecord:
    return ArticleRecord(id=article_id, year=year, authors=tuple(authors), refs=frozenset(refs))


def stream_articles(
    name: str,
    years: Iterable[int],
    per_year: int = 3,
    pool: Sequence[str] = None,
    authors: Sequence[str] = None,
) -> List[ArticleRecord]:
    """Articles of one research line; all of them cite the whole pool, so they form a clique."""
    pool = list(pool) if pool is not None else [f"{name}-r{k}" for k in range(4)]
    authors = list(authors) if authors is not None else [f"{name}-lead"]
    return [
        article(f"{name}-{year}-{j}", year, pool, authors)
        for year in years
        for j in range(per_year)
    ]


def graph(edges: Iterable[Tuple[str, str, int]], nodes: Iterable[str] = (), index: int = 0) -> SliceGraph:
    """Slice graph from (a, b, weight) triples; endpoints are added to the nodes."""
    canonical = sorted(CouplingEdge(min(a, b), max(a, b), w) for a, b, w in edges)
    all_nodes = set(nodes) | {e.a for e in canonical} | {e.b for e in canonical}
    return SliceGraph(Window(index, 2000 + index, 2003 + index), frozenset(all_nodes), tuple(canonical))


def clique_slices(windows: Dict[int, List[Iterable[str]]]) -> List[SliceGraph]:
    """
    One slice per window whose nodes are the members of the given groups.

    Nodes sharing their first character are joined by unit edges, so each
    letter behaves like one research line.
    """
    slices = []
    for index in sorted(windows):
        nodes = sorted({node for group in windows[index] for node in group})
        edges = [(a, b, 1) for a, b in itertools.combinations(nodes, 2) if a[0] == b[0]]
        slices.append(graph(edges, nodes, index))
    return slices


def partitions(windows: Dict[int, List[Iterable[str]]]) -> List[Partition]:
    return [Partition.from_groups(index, windows[index]) for index in sorted(windows)]


def set_partitions(items: Sequence):
    """Every partition of `items` into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[first] + smaller[k]] + smaller[k + 1 :]
        yield [[first]] + smaller


# Laminar, ephemeral-merge, ephemeral-split, structural-split and structural-merge
# community sequences over five windows.

EPHEMERAL_MERGE = {
    0: [{"a1", "a2", "a3"}, {"b1", "b2", "b3"}],
    1: [{"a2", "a3", "a4"}, {"b2", "b3", "b4"}],
    2: [{"a3", "a4", "a5", "b3", "b4", "b5"}],
    3: [{"a4", "a5", "a6"}, {"b4", "b5", "b6"}],
    4: [{"a5", "a6", "a7"}, {"b5", "b6", "b7"}],
}

EPHEMERAL_SPLIT = {
    0: [{"a1", "a2", "a3", "a4"}],
    1: [{"a2", "a3", "a4", "a5"}],
    2: [{"a3", "a4"}, {"a5", "a6"}],
    3: [{"a4", "a5", "a6", "a7"}],
    4: [{"a5", "a6", "a7", "a8"}],
}

STRUCTURAL_SPLIT = {
    0: [{"x1", "x2", "x3", "x4", "x5", "x6"}],
    1: [{"x1", "x2", "x3", "x4", "x5", "x6"}],
    2: [{"x1", "x2", "x3"}, {"x4", "x5", "x6"}],
    3: [{"x1", "x2", "x3"}, {"x4", "x5", "x6"}],
    4: [{"x1", "x2", "x3"}, {"x4", "x5", "x6"}],
}

STRUCTURAL_MERGE = {
    0: [{"x1", "x2", "x3"}, {"x4", "x5", "x6"}],
    1: [{"x1", "x2", "x3"}, {"x4", "x5", "x6"}],
    2: [{"x1", "x2", "x3", "x4", "x5", "x6"}],
    3: [{"x1", "x2", "x3", "x4", "x5", "x6"}],
    4: [{"x1", "x2", "x3", "x4", "x5", "x6"}],
}


@pytest.fixture(autouse=True)
def quiet_logger():
    """Keep loguru output at warnings and above during tests."""
    logger.remove()
    logger.add(lambda message: None, level="WARNING")
    yield
    # the CLI replaces sinks itself, so drop whatever is installed now
    logger.remove()


@pytest.fixture
def laminar_corpus() -> List[ArticleRecord]:
    """Two independent research lines over 1970-1979."""
    years = range(1970, 1980)
    return stream_articles("alpha", years, authors=["ada"]) + stream_articles("beta", years, authors=["bob"])
