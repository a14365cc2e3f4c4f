"""
Export Service for Streamflow

Writes the artifacts of a run:
- description.json: partitions, links, ledger and complexity score
- events.json: every classified event with its window years and sizes
- streams.json: streams with labels and member communities
- runs.json: per-seed scores behind the seed selection
- alluvial.svg: stream diagram (x = year, one lane per stream)
- stream_graph.dot: community-level stream graph
- modularity.csv: initial and final modularity per window

Every artifact is byte-deterministic for identical input.
"""

import json
from pathlib import Path
from typing import Any, Dict, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from loguru import logger

from .denoise import Description
from .ingest import ArticleRecord, write_corpus
from .streams import AlluvialLayout, ModularityPoint, Stream

SVG_HASH_SALT = "streamflow"


def dump_json(payload: Any, path: Path) -> Path:
    """Write JSON with sorted keys, two-space indent and a trailing newline."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
        f.write("\n")
    return path


class ExportService:
    """
    Serializes descriptions, streams and layouts to the run output directory.
    """

    def __init__(self, out_dir: Path):
        """
        Initialize the exporter.

        Args:
            out_dir: Output directory, created when missing
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def _years(self, description: Description) -> Dict[int, tuple]:
        return {graph.window.index: (graph.window.start_year, graph.window.end_year) for graph in description.slices}

    def events_payload(self, description: Description) -> Dict[str, Any]:
        years = self._years(description)
        events = []
        for event in description.events:
            record = event.to_dict()
            record["start_year"], record["end_year"] = years[event.window]
            events.append(record)
        return {
            "complexity": description.complexity,
            "events": events,
            "ledger": description.ledger.to_dict(),
        }

    def streams_payload(self, streams: Sequence[Stream], description: Description) -> Dict[str, Any]:
        years = self._years(description)
        return {
            "streams": [
                {
                    "id": stream.id,
                    "label": stream.label.to_dict() if stream.label else None,
                    "members": [
                        {
                            **ref.to_dict(),
                            "start_year": years[ref.window][0],
                            "end_year": years[ref.window][1],
                            "articles": sorted(description.members(ref)),
                        }
                        for ref in stream.members
                    ],
                }
                for stream in streams
            ]
        }

    def runs_payload(self, descriptions: Sequence[Description], selected: Description) -> Dict[str, Any]:
        return {
            "selected_seed": selected.seed,
            "runs": [description.summary() for description in descriptions],
        }

    def modularity_frame(self, series: Sequence[ModularityPoint]) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "window": point.window,
                    "start_year": point.start_year,
                    "end_year": point.end_year,
                    "initial_q": point.initial_q,
                    "final_q": point.final_q,
                }
                for point in series
            ],
            columns=["window", "start_year", "end_year", "initial_q", "final_q"],
        )

    def stream_graph_dot(self, streams: Sequence[Stream], layout: AlluvialLayout, description: Description) -> str:
        """Directed graph of communities; edges are stream flows and split/merge junctions."""
        years = self._years(description)
        lines = ["digraph streams {", "  rankdir=LR;", "  node [shape=box];"]
        for stream in streams:
            title = f"stream {stream.id}"
            if stream.label and stream.label.main_author:
                title += f" ({stream.label.main_author})"
            lines.append(f"  subgraph cluster_{stream.id} {{")
            lines.append(f'    label="{title}";')
            for ref in stream.members:
                start, end = years[ref.window]
                size = len(description.members(ref))
                lines.append(f'    "{ref}" [label="{ref}\\n{start}-{end}\\nn={size}"];')
            lines.append("  }")
        for ribbon in layout.ribbons:
            style = "solid" if ribbon.kind == "flow" else "dashed"
            lines.append(
                f'  "{ribbon.source}" -> "{ribbon.target}" '
                f'[kind={ribbon.kind}, weight={ribbon.width}, style={style}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    def render_alluvial(self, streams: Sequence[Stream], layout: AlluvialLayout, path: Path) -> Path:
        """
        Draw the alluvial diagram as SVG.

        Node bars are proportional to community size; ribbons are smoothed
        bands between consecutive windows.
        """
        nodes = {node.ref: node for node in layout.nodes}
        largest = max((node.size for node in layout.nodes), default=1)
        scale = 0.8 / largest
        colors = plt.get_cmap("tab20")

        years = [node.x for node in layout.nodes] or [0]
        width = max(6.0, 0.5 * (max(years) - min(years) + 2))
        height = max(3.0, 0.9 * max(1, layout.lane_count) + 1.0)

        with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
            fig, ax = plt.subplots(figsize=(width, height))

            for ribbon in layout.ribbons:
                source, target = nodes.get(ribbon.source), nodes.get(ribbon.target)
                if source is None or target is None or ribbon.width == 0:
                    continue
                xs = np.linspace(source.x, target.x, 50)
                ease = 0.5 - 0.5 * np.cos(np.linspace(0.0, np.pi, 50))
                centre = source.y + (target.y - source.y) * ease
                half = 0.5 * ribbon.width * scale
                ax.fill_between(
                    xs, centre - half, centre + half,
                    color=colors(layout.lanes[source.stream] % 20),
                    alpha=0.35 if ribbon.kind == "flow" else 0.2,
                    linewidth=0,
                )

            for node in layout.nodes:
                half = 0.5 * node.size * scale
                ax.fill_between(
                    [node.x - 0.12, node.x + 0.12], node.y - half, node.y + half,
                    color=colors(node.y % 20), linewidth=0,
                )

            for stream in streams:
                first = nodes[stream.first]
                label = f"{stream.id}"
                if stream.label and stream.label.main_author:
                    label += f" {stream.label.main_author}"
                ax.text(first.x - 0.2, first.y, label, ha="right", va="center", fontsize=7)

            ax.set_xlabel("year")
            ax.set_yticks([])
            ax.invert_yaxis()
            for side in ("top", "right", "left"):
                ax.spines[side].set_visible(False)

            fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
            plt.close(fig)
        return path

    def write_run(
        self,
        description: Description,
        streams: Sequence[Stream],
        layout: AlluvialLayout,
        series: Sequence[ModularityPoint],
        descriptions: Sequence[Description],
    ) -> Dict[str, Path]:
        """
        Write every run artifact.

        Returns:
            Mapping of artifact name to path
        """
        written: Dict[str, Path] = {}
        written["description.json"] = dump_json(description.to_dict(), self.out_dir / "description.json")
        written["events.json"] = dump_json(self.events_payload(description), self.out_dir / "events.json")
        written["streams.json"] = dump_json(
            self.streams_payload(streams, description), self.out_dir / "streams.json"
        )
        written["runs.json"] = dump_json(self.runs_payload(descriptions, description), self.out_dir / "runs.json")
        written["alluvial.svg"] = self.render_alluvial(streams, layout, self.out_dir / "alluvial.svg")

        dot_path = self.out_dir / "stream_graph.dot"
        with open(dot_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.stream_graph_dot(streams, layout, description))
        written["stream_graph.dot"] = dot_path

        csv_path = self.out_dir / "modularity.csv"
        self.modularity_frame(series).to_csv(csv_path, index=False, float_format="%.10f", lineterminator="\n")
        written["modularity.csv"] = csv_path

        logger.info(f"Wrote {len(written)} artifacts to {self.out_dir}")
        return written

    def write_synth(self, articles: Sequence[ArticleRecord], truth_json: str) -> Dict[str, Path]:
        """Write corpus.jsonl and truth.json of a synthetic scenario."""
        corpus_path = self.out_dir / "corpus.jsonl"
        write_corpus(articles, corpus_path)
        truth_path = self.out_dir / "truth.json"
        with open(truth_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(truth_json)
        logger.info(f"Wrote {len(articles)} articles and ground truth to {self.out_dir}")
        return {"corpus.jsonl": corpus_path, "truth.json": truth_path}
