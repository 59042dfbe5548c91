"""Report rendering: topics.json, graph.json, and the plain-text report.

Float values are printed with repr, which round-trips exactly, so
every number in the report can be compared against the serialized
model without loss. The report repeats the reproducibility-relevant
manifest fields (config, input hashes, versions, stats) but never the
wall times, so rerunning a pipeline reproduces the report byte for
byte.
"""

from __future__ import annotations

import csv
import io
from typing import Sequence

from .labeling import NON_HEALTH, CategoryGraph, TopicSummary


def topics_payload(
    summaries: Sequence[TopicSummary],
    categories: Sequence[str],
    top_n: int,
    tau: float,
) -> dict:
    topics = []
    for s in summaries:
        if s.attachment is None:
            raise ValueError(f"topic {s.topic} has no attachment")
        topics.append(
            {
                "topic": s.topic,
                "label": s.label,
                "seed_hits": dict(s.seed_hits),
                "category_mass": dict(s.category_mass or {}),
                "attachment": {
                    "kind": s.attachment.kind,
                    "category": s.attachment.category,
                    "name": s.attachment.name,
                },
                "top_words": [{"word": w, "weight": x} for w, x in s.top_words],
            }
        )
    return {
        "top_n": top_n,
        "tau": tau,
        "categories": list(categories),
        "topics": topics,
    }


def graph_payload(graph: CategoryGraph) -> dict:
    return {
        "nodes": list(graph.nodes),
        "edges": [
            {
                "from": e.source,
                "to": e.target,
                "weight": e.weight,
                "witnesses": [{"topic": t, "word": w} for t, w in e.witnesses],
            }
            for e in graph.edges
        ],
    }


def topic_words_csv(summaries: Sequence[TopicSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["topic", "rank", "word", "weight"])
    for s in summaries:
        for rank, (word, weight) in enumerate(s.top_words, 1):
            writer.writerow([s.topic, rank, word, repr(weight)])
    return buf.getvalue()


def _section(title: str) -> list[str]:
    return ["", title, "-" * len(title)]


def _flatten_config(node, prefix: str = "") -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = []
    for key in sorted(node):
        value = node[key]
        path = f"{prefix}.{key}" if prefix else key
        if isinstance(value, dict):
            items.extend(_flatten_config(value, path))
        else:
            items.append((path, value))
    return items


def render_report(
    cfg,
    manifest: dict,
    summaries: Sequence[TopicSummary],
    graph: CategoryGraph,
    curve_rows: list[list[str]] | None,
) -> str:
    lines: list[str] = ["negtopics run report", "===================="]

    lines += _section("Configuration")
    for path, value in _flatten_config(manifest.get("config", {})):
        lines.append(f"{path} = {value!r}")

    lines += _section("Input hashes")
    inputs = manifest.get("inputs", {})
    if inputs:
        for name in sorted(inputs):
            lines.append(f"{name}: sha256 {inputs[name]}")
    else:
        lines.append("(none recorded)")

    lines += _section("Versions")
    for name in sorted(manifest.get("versions", {})):
        lines.append(f"{name} {manifest['versions'][name]}")

    lines += _section("Stage statistics")
    stages = manifest.get("stages", {})
    for stage in ("simulate", "ingest", "sentiment", "select_k", "train"):
        if stage not in stages:
            continue
        stats = {k: v for k, v in stages[stage].items() if k != "seconds"}
        for key, value in sorted(stats.items()):
            lines.append(f"{stage}.{key} = {value!r}")

    if curve_rows:
        lines += _section("Topic-count selection")
        widths = [
            max(len(row[i]) for row in curve_rows) for i in range(len(curve_rows[0]))
        ]
        for row in curve_rows:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        if "selected_k" in manifest:
            lines.append(f"selected k = {manifest['selected_k']}")

    lines += _section("Topic assignments")
    by_cat: dict[str, dict[str, list[TopicSummary]]] = {}
    non_health: list[TopicSummary] = []
    for s in summaries:
        a = s.attachment
        if a is None:
            continue
        if a.kind == "non_health":
            non_health.append(s)
        else:
            by_cat.setdefault(a.category, {"main": [], "subtopic": []})[a.kind].append(s)
    for cat in graph.nodes:
        buckets = by_cat.get(cat)
        if buckets is None:
            continue
        lines.append(f"{cat}:")
        for s in buckets["main"]:
            lines.append(f"  main topic {s.topic}")
        for s in buckets["subtopic"]:
            lines.append(f"  sub-topic {s.attachment.name!r} (topic {s.topic})")
    if non_health:
        lines.append(f"{NON_HEALTH}:")
        for s in non_health:
            lines.append(f"  {s.attachment.name!r} (topic {s.topic})")

    lines += _section("Top words per topic")
    for s in summaries:
        lines.append(f"topic {s.topic}:")
        for word, weight in s.top_words:
            lines.append(f"  {word}  {weight!r}")

    lines += _section("Category relationships")
    if graph.edges:
        for e in graph.edges:
            lines.append(f"{e.source} -> {e.target}  (weight {e.weight})")
            for topic, word in e.witnesses:
                lines.append(f"  witness: topic {topic} via {word!r}")
    else:
        lines.append("(no edges)")

    lines.append("")
    return "\n".join(lines)
