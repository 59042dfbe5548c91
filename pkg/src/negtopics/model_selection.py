"""Held-out likelihood evaluation and topic-count selection.

The corpus is split once into train and test partitions. For every
candidate K a model is trained on the train partition and scored on
the identical test partition with a sequential particle estimator of
the held-out log-likelihood; the K with the best per-token value wins,
smaller K on ties.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from hashlib import sha256
from typing import Sequence

import numpy as np

from ._kernels import left_to_right_kernel
from .corpus import build_vocabulary
from .errors import ConfigError, DataError
from .lda import Hyperparams, TopicModel, train

TIE_EPS = 1e-12


@dataclass(frozen=True)
class SplitSpec:
    """Seeded shuffle, then a prefix split at round(train_fraction * D)."""

    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")


@dataclass(frozen=True)
class EvalConfig:
    particles: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.particles < 1:
            raise ConfigError("particles must be >= 1")


@dataclass(frozen=True)
class EvalResult:
    k: int
    heldout_ll: float
    per_token_ll: float
    test_tokens: int
    oov_dropped: int
    partition_hash: str | None = None


def split_corpus(docs: Sequence, spec: SplitSpec) -> tuple[list, list]:
    """Shuffle with spec.seed and split off the train prefix.

    The split size follows round(train_fraction * D), clamped so both
    partitions stay non-empty. Returns (train, test); together they
    hold every input document exactly once.
    """
    n_docs = len(docs)
    if n_docs < 2:
        raise DataError("need at least 2 documents to split")
    order = np.random.default_rng(spec.seed).permutation(n_docs)
    n_train = int(round(spec.train_fraction * n_docs))
    n_train = min(max(n_train, 1), n_docs - 1)
    train_docs = [docs[i] for i in order[:n_train]]
    test_docs = [docs[i] for i in order[n_train:]]
    return train_docs, test_docs


def heldout_loglik(
    model: TopicModel,
    test_docs: Sequence[Sequence[int]],
    eval_config: EvalConfig,
    vocab_hash: str | None = None,
    partition_hash: str | None = None,
) -> EvalResult:
    """Estimate the held-out log-likelihood of the test documents.

    Token ids outside the model's vocabulary (negative or >= V) are
    dropped and counted; a document of only such tokens contributes 0.
    Each document gets its own generator, seeded from
    SeedSequence(eval seed).spawn by list position, so a document's
    term depends only on its position and the seed and the total is
    deterministic however the per-document work is scheduled.
    """
    if len(test_docs) == 0:
        raise DataError("test set is empty")
    if (
        vocab_hash is not None
        and model.vocab_hash is not None
        and vocab_hash != model.vocab_hash
    ):
        raise DataError("model was trained with a different vocabulary")
    phi = np.ascontiguousarray(model.phi, dtype=np.float64)
    n_topics, vocab_size = phi.shape
    hyper = model.hyper
    particles = eval_config.particles
    seeds = np.random.SeedSequence(eval_config.seed).spawn(len(test_docs))
    total_ll = 0.0
    test_tokens = 0
    oov_dropped = 0
    for doc, seed in zip(test_docs, seeds):
        ids = np.asarray(doc, dtype=np.int64)
        valid = ids[(ids >= 0) & (ids < vocab_size)]
        oov_dropped += ids.size - valid.size
        n = valid.size
        if n == 0:
            continue
        uniforms = np.random.default_rng(seed).random(particles * n * (n + 1) // 2)
        total_ll += left_to_right_kernel(
            valid.astype(np.int32),
            phi,
            hyper.alpha_k,
            hyper.alpha_sum,
            particles,
            uniforms,
        )
        test_tokens += n
    if test_tokens == 0:
        raise DataError("test set has no in-vocabulary tokens")
    return EvalResult(
        k=n_topics,
        heldout_ll=total_ll,
        per_token_ll=total_ll / test_tokens,
        test_tokens=test_tokens,
        oov_dropped=oov_dropped,
        partition_hash=partition_hash,
    )


def _words_of(doc) -> Sequence[str]:
    return doc.words if hasattr(doc, "words") else doc


def _partition_hash(word_docs: Sequence) -> str:
    h = sha256()
    for doc in word_docs:
        for w in _words_of(doc):
            h.update(w.encode("utf-8"))
            h.update(b"\x1f")
        h.update(b"\x1e")
    return h.hexdigest()


def _evaluate_k(args) -> EvalResult:
    k, train_ids, test_ids, vocab_size, vhash, phash, template, eval_config = args
    model = train(train_ids, template.with_k(k), vocab_size=vocab_size)
    model.vocab_hash = vhash
    return heldout_loglik(
        model, test_ids, eval_config, vocab_hash=vhash, partition_hash=phash
    )


def best_k(curve: Sequence[EvalResult]) -> int:
    """Argmax of per_token_ll; differences within 1e-12 favor smaller K."""
    if not curve:
        raise ConfigError("empty evaluation curve")
    best = curve[0]
    for res in curve[1:]:
        if res.per_token_ll > best.per_token_ll + TIE_EPS:
            best = res
    return best.k


def select_k(
    docs: Sequence,
    k_grid: Sequence[int],
    hyper_template: Hyperparams,
    split_spec: SplitSpec,
    eval_config: EvalConfig,
    min_count: int = 1,
    workers: int = 1,
) -> tuple[int, list[EvalResult]]:
    """Evaluate each K in the grid on one shared train/test split.

    docs are word-token documents (WordDocument records or plain string
    sequences). The vocabulary is built from the train partition only;
    test tokens outside it are dropped and reported per evaluation.
    Returns the selected K and the full curve in grid order.
    """
    grid = list(k_grid)
    if not grid:
        raise ConfigError("k_grid is empty")
    if any(k < 1 for k in grid):
        raise ConfigError("k_grid entries must be >= 1")
    if len(set(grid)) != len(grid):
        raise ConfigError("k_grid entries must be distinct")
    train_docs, test_docs = split_corpus(docs, split_spec)
    vocab, train_encoded, _ = build_vocabulary(train_docs, min_count=min_count)
    vhash = vocab.content_hash()
    phash = _partition_hash(test_docs)
    train_ids = [t.tokens for t in train_encoded]
    test_ids = [vocab.encode(_words_of(d)) for d in test_docs]
    tasks = [
        (k, train_ids, test_ids, len(vocab), vhash, phash, hyper_template, eval_config)
        for k in grid
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            curve = list(pool.map(_evaluate_k, tasks))
    else:
        curve = [_evaluate_k(t) for t in tasks]
    return best_k(curve), curve
