"""Tests for laminar stream extraction, labels, series and layout."""

import numpy as np
import pytest

from conftest import (
    EPHEMERAL_MERGE,
    STRUCTURAL_MERGE,
    STRUCTURAL_SPLIT,
    article,
    clique_slices,
    partitions,
    stream_articles,
)
from streamflow.services.denoise import denoise_fixpoint, select_best_description
from streamflow.services.linker import CommunityRef, jaccard
from streamflow.services.streams import (
    Stream,
    extract_streams,
    label_stream,
    label_streams,
    layout_alluvial,
    modularity_series,
)
from streamflow.utils.config_manager import PipelineConfig


def describe(windows):
    return denoise_fixpoint(partitions(windows), None, clique_slices(windows), np.random.default_rng(0))


@pytest.fixture
def laminar_description(laminar_corpus):
    return select_best_description(laminar_corpus, PipelineConfig(), [0])


class TestExtractStreams:
    def test_two_parallel_lines(self, laminar_description):
        streams = extract_streams(laminar_description)
        assert len(streams) == 2
        assert all(stream.windows() == list(range(7)) for stream in streams)

    def test_single_window_gives_one_stream_per_community(self):
        corpus = stream_articles("alpha", range(1970, 1974)) + stream_articles("beta", range(1970, 1974))
        description = select_best_description(corpus, PipelineConfig(), [0])
        streams = extract_streams(description)
        assert len(streams) == len(description.partition(0).communities) == 2
        assert all(len(stream.members) == 1 for stream in streams)

    def test_structural_split_ends_trunk_and_starts_branches(self):
        streams = extract_streams(describe(STRUCTURAL_SPLIT))
        assert [stream.members for stream in streams] == [
            (CommunityRef(0, 0), CommunityRef(1, 0)),
            (CommunityRef(2, 0), CommunityRef(3, 0), CommunityRef(4, 0)),
            (CommunityRef(2, 1), CommunityRef(3, 1), CommunityRef(4, 1)),
        ]

    def test_structural_merge_ends_branches(self):
        streams = extract_streams(describe(STRUCTURAL_MERGE))
        assert [stream.windows() for stream in streams] == [[0, 1], [0, 1], [2, 3, 4]]

    def test_corrected_merge_leaves_two_streams(self):
        streams = extract_streams(describe(EPHEMERAL_MERGE))
        assert len(streams) == 2
        assert all(len(stream.members) == 5 for stream in streams)

    @pytest.mark.parametrize("windows", [EPHEMERAL_MERGE, STRUCTURAL_SPLIT, STRUCTURAL_MERGE])
    def test_every_community_in_exactly_one_stream(self, windows):
        description = describe(windows)
        streams = extract_streams(description)
        members = [ref for stream in streams for ref in stream.members]
        assert sorted(members) == description.links.refs()
        for stream in streams:
            assert stream.windows() == list(range(stream.first.window, stream.last.window + 1))
            for a, b in zip(stream.members, stream.members[1:]):
                assert jaccard(description.members(a), description.members(b)) > 0

    def test_idempotent(self):
        description = describe(STRUCTURAL_SPLIT)
        assert extract_streams(description) == extract_streams(description)


class TestLabelStream:
    def test_plurality_author(self):
        description = describe({0: [{"p1", "p2", "p3", "p4", "p5"}]})
        articles = {
            "p1": article("p1", 2000, [], ["xavier"]),
            "p2": article("p2", 2000, [], ["xavier"]),
            "p3": article("p3", 2000, [], ["xavier"]),
            "p4": article("p4", 2000, [], ["yves"]),
            "p5": article("p5", 2000, [], ["yves"]),
        }
        (stream,) = extract_streams(description)
        assert label_stream(stream, description, articles).main_author == "xavier"

    def test_tie_goes_to_first_name(self):
        description = describe({0: [{"p1", "p2"}]})
        articles = {"p1": article("p1", 2000, [], ["bea"]), "p2": article("p2", 2000, [], ["ana"])}
        (stream,) = extract_streams(description)
        assert label_stream(stream, description, articles).main_author == "ana"

    def test_years_from_window_arithmetic(self):
        corpus = stream_articles("alpha", range(1970, 1981))
        description = select_best_description(corpus, PipelineConfig(), [0])
        (full,) = extract_streams(description)
        label = label_stream(Stream(0, full.members[3:8]), description, {a.id: a for a in corpus})
        assert (label.start_year, label.end_year) == (1973, 1980)

    def test_label_streams(self, laminar_corpus, laminar_description):
        labelled = label_streams(extract_streams(laminar_description), laminar_description, laminar_corpus)
        assert sorted(stream.label.main_author for stream in labelled) == ["ada", "bob"]
        assert all((s.label.start_year, s.label.end_year) == (1970, 1979) for s in labelled)


class TestModularitySeries:
    def test_no_corrections(self, laminar_description):
        for point in modularity_series(laminar_description):
            assert point.initial_q == point.final_q

    def test_corrected_window_improves(self):
        series = modularity_series(describe(EPHEMERAL_MERGE))
        assert series[2].initial_q == pytest.approx(0.0, abs=1e-12)
        assert series[2].final_q == pytest.approx(0.5)
        assert [p.start_year for p in series] == [2000, 2001, 2002, 2003, 2004]

    def test_empty_window(self):
        series = modularity_series(describe({0: [{"a1", "a2"}], 1: [], 2: [{"a2", "a3"}]}))
        assert (series[1].initial_q, series[1].final_q) == (0.0, 0.0)


class TestLayout:
    def test_single_stream(self):
        description = describe({t: [{f"a{t}", f"a{t + 1}"}] for t in range(4)})
        layout = layout_alluvial(extract_streams(description), description)
        assert layout.lane_count == 1
        assert {node.y for node in layout.nodes} == {0}
        assert [node.x for node in layout.nodes] == [2000, 2001, 2002, 2003]

    def test_parallel_streams_get_distinct_lanes(self, laminar_description):
        streams = extract_streams(laminar_description)
        layout = layout_alluvial(streams, laminar_description)
        assert layout.lane_count == 2
        for stream in streams:
            assert {node.y for node in layout.nodes if node.stream == stream.id} == {layout.lanes[stream.id]}

    def test_split_forks_the_trunk_lane(self):
        description = describe(STRUCTURAL_SPLIT)
        streams = extract_streams(description)
        layout = layout_alluvial(streams, description)
        assert layout.lanes == {0: 0, 1: 0, 2: 1}
        splits = [ribbon for ribbon in layout.ribbons if ribbon.kind == "split"]
        assert [(r.source, r.target, r.width) for r in splits] == [
            (CommunityRef(1, 0), CommunityRef(2, 0), 3),
            (CommunityRef(1, 0), CommunityRef(2, 1), 3),
        ]

    def test_empty(self):
        description = describe({})
        assert layout_alluvial([], description).nodes == []
