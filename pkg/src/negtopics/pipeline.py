"""Batch pipeline stages and their shared configuration.

Stage order within cleaning is fixed: tokenize, then stop-word
removal, then sentiment scoring, and it is recorded in the run
manifest. One global seed fans out to per-stage seeds through numpy's
SeedSequence with a fixed stage-id table, so observing or skipping one
stage never shifts another stage's random stream. Every artifact is
written deterministically; the manifest additionally records wall
times, which is why the manifest itself is the one file a rerun may
not reproduce byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import (
    dump_json,
    jsonl_line,
    load_manifest,
    load_model,
    open_text,
    read_word_docs,
    save_manifest,
    save_model,
    sha256_file,
    sha256_source,
    word_doc_record,
)
from .corpus import (
    TokenizerRules,
    build_vocabulary,
    clean_document,
    load_queries,
    load_stopwords,
    _parse_record,
)
from .errors import ConfigError, DataError
from .labeling import (
    attach_subtopics,
    build_relationship_graph,
    build_summaries,
    load_seed_lexicon,
)
from .lda import Hyperparams, generate_corpus, train_full
from .model_selection import EvalConfig, SplitSpec, select_k
from .report import graph_payload, render_report, topic_words_csv, topics_payload
from .sentiment import load_lexicon, score_document

STAGE_ORDER = ["tokenize", "stop_words", "sentiment"]

# SeedSequence([seed, stage_id]) -> first uint64 word; see derive_seed.
STAGE_IDS = {
    "simulate": 1,
    "plant": 2,
    "split": 3,
    "train": 4,
    "eval": 5,
}

_CONFIG_DEFAULTS: dict = {
    "input": None,
    "out_dir": "out",
    "lang_filter": "en",
    "stop_words": None,
    "queries": None,
    "pos_lexicon": None,
    "neg_lexicon": None,
    "seed_lexicon": None,
    "tokenizer": {
        "lowercase": True,
        "strip_urls": True,
        "strip_mentions": True,
        "fold_hashtags": True,
        "min_token_len": 2,
    },
    "min_count": 5,
    "hyper": {
        "alpha_sum": 5.0,
        "beta": 0.01,
        "iterations": 1000,
        "samples": 1,
        "thinning": 10,
    },
    "split": {"train_fraction": 0.8},
    "eval": {"particles": 20},
    "k_grid": None,
    "k": None,
    "top_n": 20,
    "tau": 0.5,
    "contains_stem": True,
    "seed": 42,
    "workers": 1,
    "simulate": {
        "docs": 2000,
        "mean_len": 10.0,
        "k_true": 10,
        "vocab_size": 100,
        "alpha": 0.2,
        "negative_fraction": 0.4,
        "category_fraction": 0.4,
        "theta_sidecar_limit": 100000,
    },
}


def derive_seed(root_seed: int, stage: str) -> int:
    """Per-stage seed: first uint64 of SeedSequence([root, stage id])."""
    ss = np.random.SeedSequence([int(root_seed), STAGE_IDS[stage]])
    return int(ss.generate_state(1, np.uint64)[0])


def _merge(defaults: dict, override: dict, path: str = "") -> dict:
    out = dict(defaults)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(defaults[key], dict) and defaults[key]:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be an object")
            out[key] = _merge(defaults[key], value, where)
        else:
            out[key] = value
    return out


def _apply_flag(raw: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = raw
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


@dataclass
class PipelineConfig:
    """Resolved configuration; raw holds the JSON-able snapshot."""

    raw: dict

    def __post_init__(self) -> None:
        r = self.raw
        self.input: Path | None = Path(r["input"]) if r["input"] else None
        self.out_dir = Path(r["out_dir"])
        self.lang_filter: str | None = r["lang_filter"]
        self.stop_words = r["stop_words"]
        self.queries = r["queries"]
        self.pos_lexicon = r["pos_lexicon"]
        self.neg_lexicon = r["neg_lexicon"]
        self.seed_lexicon = r["seed_lexicon"]
        self.rules = TokenizerRules(**r["tokenizer"])
        self.min_count = int(r["min_count"])
        self.k_grid = r["k_grid"]
        self.k = r["k"]
        self.top_n = int(r["top_n"])
        self.tau = float(r["tau"])
        self.contains_stem = bool(r["contains_stem"])
        self.seed = int(r["seed"])
        self.workers = int(r["workers"])
        if self.top_n < 1:
            raise ConfigError("top_n must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.k is not None and self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.k_grid is not None:
            if not isinstance(self.k_grid, (list, tuple)) or not self.k_grid:
                raise ConfigError("k_grid must be a non-empty list")

    def hyper(self, k: int) -> Hyperparams:
        h = self.raw["hyper"]
        return Hyperparams(
            k=k,
            alpha_sum=float(h["alpha_sum"]),
            beta=float(h["beta"]),
            iterations=int(h["iterations"]),
            seed=derive_seed(self.seed, "train"),
            samples=int(h["samples"]),
            thinning=int(h["thinning"]),
        )

    def split_spec(self) -> SplitSpec:
        return SplitSpec(
            train_fraction=float(self.raw["split"]["train_fraction"]),
            seed=derive_seed(self.seed, "split"),
        )

    def eval_config(self) -> EvalConfig:
        return EvalConfig(
            particles=int(self.raw["eval"]["particles"]),
            seed=derive_seed(self.seed, "eval"),
        )


def resolve_config(config_path: str | None, flags: dict | None = None) -> PipelineConfig:
    """Combine defaults, the config file, and flag overrides.

    Precedence is flags over file over defaults. Unknown keys anywhere
    are rejected rather than ignored.
    """
    raw = json.loads(json.dumps(_CONFIG_DEFAULTS))
    if config_path is not None:
        try:
            text = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        try:
            file_cfg = json.loads(text)
        except ValueError as exc:
            raise ConfigError(f"config file {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"config file {config_path} must hold a JSON object")
        raw = _merge(raw, file_cfg)
    for dotted, value in (flags or {}).items():
        if value is not None:
            _apply_flag(raw, dotted, value)
    try:
        return PipelineConfig(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration: {exc}") from exc


def _require_input(cfg: PipelineConfig) -> Path:
    if cfg.input is None:
        raise ConfigError("no input corpus configured; set \"input\" or pass --input")
    if not cfg.input.exists():
        raise ConfigError(f"input corpus {cfg.input} does not exist")
    return cfg.input


def _require_artifact(cfg: PipelineConfig, name: str, produced_by: str) -> Path:
    path = cfg.out_dir / name
    if not path.exists():
        raise DataError(f"missing artifact {path}; run the {produced_by} stage first")
    return path


def _update_manifest(
    cfg: PipelineConfig, stage: str, seconds: float, stats: dict, inputs: dict
) -> None:
    manifest = load_manifest(cfg.out_dir)
    manifest["config"] = cfg.raw
    manifest["versions"] = _versions()
    manifest["stage_order"] = STAGE_ORDER
    manifest["seed_derivation"] = {
        "scheme": "numpy SeedSequence([seed, stage_id]), first uint64 word",
        "stage_ids": STAGE_IDS,
        "prng": "numpy PCG64 (default_rng)",
    }
    manifest.setdefault("inputs", {}).update(inputs)
    manifest.setdefault("stages", {})[stage] = {"seconds": seconds, **stats}
    save_manifest(cfg.out_dir, manifest)


def _versions() -> dict:
    import numba

    return {
        "negtopics": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "numba": numba.__version__,
    }


def run_ingest(cfg: PipelineConfig) -> dict:
    """Read the raw corpus and write the cleaned corpus artifact.

    Applies the fixed cleaning order, deduplicates by document id
    (first occurrence wins), drops documents with no surviving tokens,
    and records every counter in corpus_stats.json and the manifest.
    """
    t0 = time.perf_counter()
    input_path = _require_input(cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    stopwords = load_stopwords(open_text(cfg.stop_words, "stopwords_en.txt"))
    queries = load_queries(open_text(cfg.queries, "queries_default.txt"))
    seen: set[str] = set()
    stats = {
        "lines": 0,
        "documents": 0,
        "tokens": 0,
        "malformed": 0,
        "skipped_lang": 0,
        "duplicate_ids": 0,
        "dropped_empty": 0,
        "category_counts": {c: 0 for c in queries.categories},
    }
    out_path = cfg.out_dir / "corpus.jsonl"
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    try:
        src = open(input_path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read corpus file {input_path}: {exc}") from exc
    with src, open(tmp_path, "w", encoding="utf-8") as dst:
        for line in src:
            if not line.strip():
                continue
            stats["lines"] += 1
            doc = _parse_record(line)
            if doc is None:
                stats["malformed"] += 1
                continue
            if (
                cfg.lang_filter is not None
                and doc.lang is not None
                and doc.lang != cfg.lang_filter
            ):
                stats["skipped_lang"] += 1
                continue
            if doc.id in seen:
                stats["duplicate_ids"] += 1
                continue
            seen.add(doc.id)
            cleaned = clean_document(doc, cfg.rules, stopwords, queries)
            if not cleaned.words:
                stats["dropped_empty"] += 1
                continue
            stats["documents"] += 1
            stats["tokens"] += len(cleaned.words)
            for cat in cleaned.categories:
                stats["category_counts"][cat] += 1
            dst.write(jsonl_line(word_doc_record(cleaned)))
            dst.write("\n")
    if stats["lines"] > 0 and stats["malformed"] * 2 > stats["lines"]:
        tmp_path.unlink()
        raise DataError(
            f"{stats['malformed']} of {stats['lines']} lines are malformed; "
            "input does not look like a JSON Lines corpus"
        )
    if stats["documents"] == 0:
        tmp_path.unlink()
        raise DataError(f"no documents survived ingestion from {input_path}")
    tmp_path.replace(out_path)
    dump_json(stats, cfg.out_dir / "corpus_stats.json")
    _update_manifest(
        cfg,
        "ingest",
        time.perf_counter() - t0,
        stats,
        {
            "corpus": sha256_file(input_path),
            "stop_words": sha256_source(cfg.stop_words, "stopwords_en.txt"),
            "queries": sha256_source(cfg.queries, "queries_default.txt"),
        },
    )
    return stats


def run_sentiment(cfg: PipelineConfig) -> dict:
    """Score the cleaned corpus and keep the Negative documents.

    Negative lines are copied through unchanged, so the negative
    corpus is byte for byte a subset of the cleaned corpus.
    """
    t0 = time.perf_counter()
    corpus_path = _require_artifact(cfg, "corpus.jsonl", "ingest")
    lexicon = load_lexicon(
        open_text(cfg.pos_lexicon, "lexicon_positive.txt"),
        open_text(cfg.neg_lexicon, "lexicon_negative.txt"),
    )
    total = 0
    negative = 0
    out_path = cfg.out_dir / "negative.jsonl"
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    with open(corpus_path, "r", encoding="utf-8") as src, open(
        tmp_path, "w", encoding="utf-8"
    ) as dst:
        for lineno, line in enumerate(src, 1):
            if not line.strip():
                continue
            try:
                words = json.loads(line)["words"]
            except (ValueError, KeyError) as exc:
                raise DataError(
                    f"{corpus_path}:{lineno}: bad corpus record: {exc}"
                ) from exc
            total += 1
            if score_document(words, lexicon).is_negative:
                negative += 1
                dst.write(line if line.endswith("\n") else line + "\n")
    tmp_path.replace(out_path)
    stats = {
        "total": total,
        "negative": negative,
        "fraction": negative / total if total else 0.0,
    }
    dump_json(stats, cfg.out_dir / "sentiment_stats.json")
    _update_manifest(
        cfg,
        "sentiment",
        time.perf_counter() - t0,
        stats,
        {
            "pos_lexicon": sha256_source(cfg.pos_lexicon, "lexicon_positive.txt"),
            "neg_lexicon": sha256_source(cfg.neg_lexicon, "lexicon_negative.txt"),
        },
    )
    return stats


def run_select_k(cfg: PipelineConfig) -> dict:
    """Sweep the configured K grid on one split of the negative corpus."""
    t0 = time.perf_counter()
    neg_path = _require_artifact(cfg, "negative.jsonl", "sentiment")
    if cfg.k_grid is None:
        raise ConfigError("no k_grid configured; set \"k_grid\" or pass --k-grid")
    grid = [int(k) for k in cfg.k_grid]
    docs = read_word_docs(neg_path)
    best, curve = select_k(
        docs,
        grid,
        cfg.hyper(grid[0]),
        cfg.split_spec(),
        cfg.eval_config(),
        min_count=cfg.min_count,
        workers=cfg.workers,
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "heldout_ll", "per_token_ll", "test_tokens", "oov_dropped"])
    for res in curve:
        writer.writerow(
            [res.k, repr(res.heldout_ll), repr(res.per_token_ll), res.test_tokens, res.oov_dropped]
        )
    (cfg.out_dir / "kselect.csv").write_text(buf.getvalue(), encoding="utf-8")
    summary = {
        "best_k": best,
        "partition_hash": curve[0].partition_hash,
        "documents": len(docs),
        "curve": [
            {
                "k": r.k,
                "heldout_ll": r.heldout_ll,
                "per_token_ll": r.per_token_ll,
                "test_tokens": r.test_tokens,
                "oov_dropped": r.oov_dropped,
            }
            for r in curve
        ],
    }
    dump_json(summary, cfg.out_dir / "kselect.json")
    manifest_stats = {"best_k": best, "k_grid": grid, "documents": len(docs)}
    _update_manifest(cfg, "select_k", time.perf_counter() - t0, manifest_stats, {})
    manifest = load_manifest(cfg.out_dir)
    manifest["selected_k"] = best
    save_manifest(cfg.out_dir, manifest)
    return summary


def run_train(cfg: PipelineConfig) -> dict:
    """Train the final model on the whole negative corpus.

    K comes from --k when given, otherwise from the select-k artifact.
    """
    t0 = time.perf_counter()
    neg_path = _require_artifact(cfg, "negative.jsonl", "sentiment")
    k = cfg.k
    if k is None:
        kselect_path = cfg.out_dir / "kselect.json"
        if not kselect_path.exists():
            raise ConfigError("no topic count: run select-k first or pass --k")
        k = int(json.loads(kselect_path.read_text(encoding="utf-8"))["best_k"])
    docs = read_word_docs(neg_path)
    vocab, encoded, dropped = build_vocabulary(docs, min_count=cfg.min_count)
    hyper = cfg.hyper(k)
    model, state = train_full(
        [d.tokens for d in encoded], hyper, vocab_size=len(vocab)
    )
    averaged = hyper.samples > 1
    save_model(
        cfg.out_dir / "model.json",
        hyper,
        vocab,
        [d.id for d in encoded],
        state.n_kw,
        state.n_dk,
        phi=model.phi if averaged else None,
        theta=model.theta if averaged else None,
    )
    stats = {
        "k": k,
        "documents": len(encoded),
        "dropped_empty": dropped,
        "vocabulary": len(vocab),
        "tokens": int(state.num_tokens),
    }
    _update_manifest(cfg, "train", time.perf_counter() - t0, stats, {})
    return stats


def run_report(cfg: PipelineConfig) -> dict:
    """Label topics, build the category graph, and render the report."""
    t0 = time.perf_counter()
    model_path = _require_artifact(cfg, "model.json", "train")
    neg_path = _require_artifact(cfg, "negative.jsonl", "sentiment")
    loaded = load_model(model_path)
    if loaded.n_dk is None:
        raise DataError(f"model {model_path} lacks document counts; retrain with n_dk")
    docs = read_word_docs(neg_path)
    cats_by_id = {d.id: d.categories for d in docs}
    try:
        doc_categories = [cats_by_id[i] for i in loaded.doc_ids]
    except KeyError as exc:
        raise DataError(
            f"model documents are missing from {neg_path}: {exc}; artifacts are stale"
        ) from exc
    seeds = load_seed_lexicon(open_text(cfg.seed_lexicon, "seeds_default.txt"))
    summaries = build_summaries(
        loaded.model,
        loaded.vocab.words,
        doc_categories,
        seeds,
        top_n=cfg.top_n,
        contains_stem=cfg.contains_stem,
    )
    attach_subtopics(summaries, seeds, tau=cfg.tau, contains_stem=cfg.contains_stem)
    graph = build_relationship_graph(summaries, seeds, contains_stem=cfg.contains_stem)
    topics = topics_payload(summaries, seeds.categories, cfg.top_n, cfg.tau)
    dump_json(topics, cfg.out_dir / "topics.json")
    dump_json(graph_payload(graph), cfg.out_dir / "graph.json")
    (cfg.out_dir / "topic_words.csv").write_text(
        topic_words_csv(summaries), encoding="utf-8"
    )
    curve_rows = None
    kselect_path = cfg.out_dir / "kselect.csv"
    if kselect_path.exists():
        with open(kselect_path, "r", encoding="utf-8", newline="") as fh:
            curve_rows = list(csv.reader(fh))
    seed_hash = sha256_source(cfg.seed_lexicon, "seeds_default.txt")
    manifest = load_manifest(cfg.out_dir)
    # Record the seed lexicon hash before rendering so the report lists
    # every input it depends on and a rerun reproduces it byte for byte.
    manifest.setdefault("inputs", {})["seed_lexicon"] = seed_hash
    save_manifest(cfg.out_dir, manifest)
    report_text = render_report(cfg, manifest, summaries, graph, curve_rows)
    (cfg.out_dir / "report.txt").write_text(report_text, encoding="utf-8")
    stats = {"topics": len(summaries), "edges": len(graph.edges)}
    _update_manifest(
        cfg, "report", time.perf_counter() - t0, stats, {"seed_lexicon": seed_hash}
    )
    return stats


def _block_phi(k_true: int, vocab_size: int) -> np.ndarray:
    """Well separated topics: 90% of each topic's mass on its own word
    block, the rest uniform, so true top words are recoverable."""
    if vocab_size < k_true:
        raise ConfigError("simulate.vocab_size must be >= simulate.k_true")
    block = vocab_size // k_true
    phi = np.full((k_true, vocab_size), 0.1 / vocab_size)
    for k in range(k_true):
        lo = k * block
        hi = vocab_size if k == k_true - 1 else lo + block
        phi[k, lo:hi] += 0.9 / (hi - lo)
    return phi


def run_simulate(cfg: PipelineConfig) -> dict:
    """Generate a synthetic raw corpus plus a truth sidecar.

    Documents are drawn from a block-structured topic model; a seeded
    subset gets one negative-lexicon word appended (planted polarity)
    and an independent seeded subset gets one category query term
    (planted categories). The sidecar records phi, theta, and both
    plantings; theta is omitted above theta_sidecar_limit documents to
    keep the sidecar tractable.
    """
    t0 = time.perf_counter()
    sim = cfg.raw["simulate"]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    n_docs = int(sim["docs"])
    k_true = int(sim["k_true"])
    vocab_size = int(sim["vocab_size"])
    phi = _block_phi(k_true, vocab_size)
    docs, theta = generate_corpus(
        phi,
        sim["alpha"],
        n_docs,
        float(sim["mean_len"]),
        derive_seed(cfg.seed, "simulate"),
    )
    lexicon = load_lexicon(
        open_text(cfg.pos_lexicon, "lexicon_positive.txt"),
        open_text(cfg.neg_lexicon, "lexicon_negative.txt"),
    )
    neg_words = sorted(lexicon.neg_literals)
    if not neg_words:
        neg_words = [stem + "ed" for stem in lexicon.neg_prefixes]
    queries = load_queries(open_text(cfg.queries, "queries_default.txt"))
    cat_terms = {
        c: next((t for t in terms if not t.startswith("#")), terms[0].lstrip("#"))
        for c, terms in queries.categories.items()
    }
    cat_names = list(queries.categories)
    width = max(2, len(str(vocab_size - 1)))
    vocab_words = [f"w{i:0{width}d}" for i in range(vocab_size)]
    rng = np.random.default_rng(derive_seed(cfg.seed, "plant"))
    planted_negative: list[str] = []
    planted_categories: dict[str, list[str]] = {}
    out_path = cfg.out_dir / "simulated.jsonl"
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    id_width = len(str(n_docs - 1))
    with open(tmp_path, "w", encoding="utf-8") as dst:
        for d, tokens in enumerate(docs):
            doc_id = f"doc{d:0{id_width}d}"
            words = [vocab_words[t] for t in tokens]
            if rng.random() < float(sim["negative_fraction"]):
                words.append(neg_words[int(rng.integers(len(neg_words)))])
                planted_negative.append(doc_id)
            if rng.random() < float(sim["category_fraction"]):
                cat = cat_names[int(rng.integers(len(cat_names)))]
                words.append(cat_terms[cat])
                planted_categories[doc_id] = [cat]
            record = {"id": doc_id, "lang": "en", "text": " ".join(words)}
            dst.write(jsonl_line(record))
            dst.write("\n")
    tmp_path.replace(out_path)
    truth = {
        "phi_true": [row.tolist() for row in phi],
        "theta_true": [row.tolist() for row in theta]
        if n_docs <= int(sim["theta_sidecar_limit"])
        else None,
        "planted_negative": planted_negative,
        "planted_categories": planted_categories,
        "vocab_words": vocab_words,
    }
    dump_json(truth, cfg.out_dir / "truth.json", indent=None)
    stats = {
        "documents": n_docs,
        "planted_negative": len(planted_negative),
        "planted_categories": len(planted_categories),
    }
    _update_manifest(cfg, "simulate", time.perf_counter() - t0, stats, {})
    return stats
