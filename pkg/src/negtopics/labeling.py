"""Seed-word topic labeling, sub-topic attachment, and the category graph.

A seed lexicon maps category names to stems; 'diabet*' matches any
word starting with the stem, and with the contains-stem option it also
matches the stem embedded after a non-letter (so 'type2diabetes'
counts). A topic whose top words give one category a strict majority
takes that category as its main label. The remaining topics attach as
named sub-topics to the category that dominates their document mass,
or to the Non-Health bucket when no category reaches the threshold.
Edges between categories record topics that sit under one category
while surfacing another category's seed words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DataError
from .lda import TopicModel, top_words

NON_HEALTH = "Non-Health"


def _stem_in_word(word: str, stem: str) -> bool:
    """True when stem occurs in word right after a non-letter."""
    idx = word.find(stem, 1)
    while idx != -1:
        if not word[idx - 1].isalpha():
            return True
        idx = word.find(stem, idx + 1)
    return False


class SeedLexicon:
    """Category names mapped to seed terms; '*' marks a prefix stem."""

    def __init__(self, categories: dict[str, Sequence[str]]):
        if not categories:
            raise DataError("seed lexicon has no categories")
        self.terms: dict[str, tuple[tuple[str, bool], ...]] = {}
        for name, terms in categories.items():
            parsed = []
            for term in terms:
                term = term.strip().lower()
                if not term:
                    continue
                if term.endswith("*"):
                    stem = term[:-1]
                    if not stem or "*" in stem:
                        raise DataError(f"bad seed term {term!r} in {name!r}")
                    parsed.append((stem, True))
                else:
                    if "*" in term:
                        raise DataError(f"bad seed term {term!r} in {name!r}")
                    parsed.append((term, False))
            if not parsed:
                raise DataError(f"seed category {name!r} has no terms")
            self.terms[name] = tuple(parsed)

    @property
    def categories(self) -> tuple[str, ...]:
        return tuple(self.terms)

    def matches(self, word: str, category: str, contains_stem: bool = True) -> bool:
        for stem, is_prefix in self.terms[category]:
            if is_prefix:
                if word.startswith(stem):
                    return True
                if contains_stem and _stem_in_word(word, stem):
                    return True
            elif word == stem:
                return True
        return False

    def matches_any(self, word: str, contains_stem: bool = True) -> bool:
        return any(self.matches(word, c, contains_stem) for c in self.terms)


def load_seed_lexicon(source: str | Path | IO[str]) -> SeedLexicon:
    """Load seeds from a query-set style file: '[Category]' then terms."""
    from .corpus import load_queries

    qs = load_queries(source)
    return SeedLexicon(qs.categories)


@dataclass(frozen=True)
class Attachment:
    """Where a topic ended up: its bucket and optional sub-topic name."""

    kind: str  # "main", "subtopic", or "non_health"
    category: str | None = None
    name: str | None = None


@dataclass
class TopicSummary:
    topic: int
    top_words: list[tuple[str, float]]
    label: str | None
    seed_hits: dict[str, int]
    category_mass: dict[str, float] | None = None
    attachment: Attachment | None = None


def label_topic(
    topic_words: Sequence[tuple[str, float]],
    seeds: SeedLexicon,
    n: int | None = None,
    contains_stem: bool = True,
) -> tuple[str | None, dict[str, int]]:
    """Label from the top words: the unique category matched by more
    than half of them, or None when there is no such category."""
    if n is None:
        n = len(topic_words)
    window = list(topic_words[:n])
    if not window:
        raise DataError("topic has no top words")
    hits = {
        cat: sum(1 for w, _ in window if seeds.matches(w, cat, contains_stem))
        for cat in seeds.categories
    }
    majority = [cat for cat, h in hits.items() if 2 * h > len(window)]
    label = majority[0] if len(majority) == 1 else None
    return label, hits


def _subtopic_name(
    topic_words: Sequence[tuple[str, float]], seeds: SeedLexicon, contains_stem: bool
) -> str:
    """Highest-weight top word that is not a seed word of any category.

    top words arrive weight-descending with id-order ties, so the first
    non-seed entry is the name. Falls back to the first word when every
    top word is a seed word.
    """
    for word, _ in topic_words:
        if not seeds.matches_any(word, contains_stem):
            return word
    return topic_words[0][0]


def build_summaries(
    model: TopicModel,
    words: Sequence[str],
    doc_categories: Sequence[Iterable[str]],
    seeds: SeedLexicon,
    top_n: int = 20,
    contains_stem: bool = True,
) -> list[TopicSummary]:
    """Summarize every topic: top words, main label, category mass.

    doc_categories[d] holds the query categories of training document
    d, aligned with the rows of model.theta. category_mass normalizes
    the theta mass of each category's documents so the masses of one
    topic sum to 1 when any tagged document exists.
    """
    if len(doc_categories) != model.theta.shape[0]:
        raise DataError("doc_categories does not align with theta rows")
    theta = model.theta
    cats = seeds.categories
    cat_docs = {
        c: [d for d, dc in enumerate(doc_categories) if c in set(dc)] for c in cats
    }
    summaries = []
    for k in range(model.num_topics):
        tw = top_words(model, k, top_n, words=words)
        label, hits = label_topic(tw, seeds, contains_stem=contains_stem)
        raw = {c: float(theta[cat_docs[c], k].sum()) for c in cats}
        total = sum(raw.values())
        mass = {c: (v / total if total > 0 else 0.0) for c, v in raw.items()}
        summaries.append(
            TopicSummary(
                topic=k,
                top_words=tw,
                label=label,
                seed_hits=hits,
                category_mass=mass,
            )
        )
    return summaries


def attach_subtopics(
    summaries: Sequence[TopicSummary],
    seeds: SeedLexicon,
    tau: float = 0.5,
    contains_stem: bool = True,
) -> dict[str, list[tuple[int, str]]]:
    """Route every unlabeled topic to a category or to Non-Health.

    An unlabeled topic attaches to the category holding its largest
    document mass when that mass reaches tau; ties go to the category
    declared first. Every summary gets an attachment, so the topics
    partition into main labels, sub-topics, and Non-Health. Returns
    category -> [(topic, sub-topic name)] including the Non-Health key.
    """
    if not 0.0 <= tau <= 1.0:
        raise DataError("tau must be in [0, 1]")
    attached: dict[str, list[tuple[int, str]]] = {c: [] for c in seeds.categories}
    attached[NON_HEALTH] = []
    for s in summaries:
        name = _subtopic_name(s.top_words, seeds, contains_stem)
        if s.label is not None:
            s.attachment = Attachment("main", s.label)
            continue
        if s.category_mass is None:
            raise DataError(
                f"topic {s.topic} has no category mass; build summaries from "
                "a tagged corpus before attaching"
            )
        top_cat = None
        top_mass = -1.0
        for c in seeds.categories:
            m = s.category_mass.get(c, 0.0)
            if m > top_mass:
                top_cat, top_mass = c, m
        if top_cat is not None and top_mass >= tau:
            s.attachment = Attachment("subtopic", top_cat, name)
            attached[top_cat].append((s.topic, name))
        else:
            s.attachment = Attachment("non_health", None, name)
            attached[NON_HEALTH].append((s.topic, name))
    return attached


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: int
    witnesses: tuple[tuple[int, str], ...]


@dataclass
class CategoryGraph:
    """Directed relationships between categories.

    An edge C1 -> C2 with weight w means w topics sit under C1 while
    carrying a seed word of C2 in their top words; each such topic and
    word is kept as a witness.
    """

    nodes: tuple[str, ...]
    edges: list[Edge] = field(default_factory=list)


def build_relationship_graph(
    summaries: Sequence[TopicSummary],
    seeds: SeedLexicon,
    contains_stem: bool = True,
) -> CategoryGraph:
    """Collect cross-category evidence from attached topics.

    Topics in the Non-Health bucket contribute no edges. Requires
    every summary to carry an attachment.
    """
    witnesses: dict[tuple[str, str], list[tuple[int, str]]] = {}
    for s in summaries:
        if s.attachment is None:
            raise DataError(f"topic {s.topic} is not attached; run attach_subtopics first")
        if s.attachment.kind == "non_health":
            continue
        c1 = s.attachment.category
        for c2 in seeds.categories:
            if c2 == c1:
                continue
            for word, _ in s.top_words:
                if seeds.matches(word, c2, contains_stem):
                    witnesses.setdefault((c1, c2), []).append((s.topic, word))
                    break
    edges = [
        Edge(source=c1, target=c2, weight=len(wit), witnesses=tuple(wit))
        for (c1, c2), wit in sorted(witnesses.items())
    ]
    return CategoryGraph(nodes=seeds.categories, edges=edges)
