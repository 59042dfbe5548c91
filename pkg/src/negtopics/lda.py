"""Latent Dirichlet allocation via collapsed Gibbs sampling.

The sampler keeps the three count matrices of the collapsed
representation and resamples one token at a time from

    p(z = k) proportional to (n_dk + alpha_k) * (n_kw + beta) / (n_k + V * beta)

where the counts exclude the token being resampled. Word and document
distributions are read off the counts:

    phi_kw   = (n_kw + beta)    / (n_k + V * beta)
    theta_dk = (n_dk + alpha_k) / (N_d + alpha_sum)

The document prior is symmetric with alpha_k = alpha_sum / K. All
randomness comes from numpy PCG64 generators seeded explicitly, so a
fixed seed reproduces the exact same model bytes on a platform.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from ._kernels import gibbs_sweep_kernel
from .errors import ConfigError, DataError


@dataclass(frozen=True)
class Hyperparams:
    """Sampler hyperparameters.

    samples and thinning control optional posterior averaging: after
    the burn-in of `iterations` sweeps the estimator averages `samples`
    states taken every `thinning` sweeps. The default samples=1 keeps
    the plain point estimate from the final state.
    """

    k: int
    alpha_sum: float = 5.0
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    samples: int = 1
    thinning: int = 10

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigError("topic count k must be >= 1")
        if not self.alpha_sum > 0:
            raise ConfigError("alpha_sum must be > 0")
        if not self.beta > 0:
            raise ConfigError("beta must be > 0")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.thinning < 1:
            raise ConfigError("thinning must be >= 1")

    @property
    def alpha_k(self) -> float:
        return self.alpha_sum / self.k

    def with_k(self, k: int) -> "Hyperparams":
        return replace(self, k=k)


@dataclass(eq=False)
class GibbsState:
    """Sampler state: flat token arrays plus the count matrices.

    Tokens are stored document-major: words[offsets[d]:offsets[d+1]]
    are document d's words in position order, and z holds the matching
    topic assignments. The counts are always exact tallies of z, which
    validate() checks by a full recount.
    """

    words: np.ndarray
    doc_ids: np.ndarray
    offsets: np.ndarray
    z: np.ndarray
    n_dk: np.ndarray
    n_kw: np.ndarray
    n_k: np.ndarray

    @property
    def num_docs(self) -> int:
        return self.n_dk.shape[0]

    @property
    def num_topics(self) -> int:
        return self.n_kw.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.n_kw.shape[1]

    @property
    def num_tokens(self) -> int:
        return self.words.shape[0]

    def doc_slice(self, d: int) -> slice:
        return slice(int(self.offsets[d]), int(self.offsets[d + 1]))

    def z_for_doc(self, d: int) -> np.ndarray:
        return self.z[self.doc_slice(d)]

    def doc_lengths(self) -> np.ndarray:
        return np.diff(self.offsets)

    @classmethod
    def from_assignments(
        cls, docs: Sequence[Sequence[int]], z: np.ndarray, k: int, vocab_size: int
    ) -> "GibbsState":
        words, doc_ids, offsets = _flatten(docs)
        z = np.ascontiguousarray(np.asarray(z, dtype=np.int32))
        if z.shape != words.shape:
            raise DataError("assignment vector does not match token count")
        if z.size and (z.min() < 0 or z.max() >= k):
            raise DataError("assignment out of range")
        n_docs = len(docs)
        n_dk = np.zeros((n_docs, k), dtype=np.int64)
        n_kw = np.zeros((k, vocab_size), dtype=np.int64)
        n_k = np.zeros(k, dtype=np.int64)
        np.add.at(n_dk, (doc_ids, z), 1)
        np.add.at(n_kw, (z, words), 1)
        np.add.at(n_k, z, 1)
        return cls(words, doc_ids, offsets, z, n_dk, n_kw, n_k)

    def validate(self) -> None:
        """Recount z from scratch and compare with the stored tallies."""
        ref = GibbsState.from_assignments(
            [self.words[self.doc_slice(d)] for d in range(self.num_docs)],
            self.z,
            self.num_topics,
            self.vocab_size,
        )
        if not (
            np.array_equal(ref.n_dk, self.n_dk)
            and np.array_equal(ref.n_kw, self.n_kw)
            and np.array_equal(ref.n_k, self.n_k)
        ):
            raise DataError("count matrices are out of sync with assignments")


@dataclass(eq=False)
class TopicModel:
    """Point estimates of the topic-word and document-topic distributions."""

    phi: np.ndarray
    theta: np.ndarray
    hyper: Hyperparams
    vocab_hash: str | None = None

    @property
    def num_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.phi.shape[1]


def _flatten(docs: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if len(docs) == 0:
        raise DataError("no documents")
    lengths = np.asarray([len(d) for d in docs], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(lengths)))
    total = int(offsets[-1])
    if total == 0:
        raise DataError("corpus has no tokens")
    words = np.empty(total, dtype=np.int32)
    doc_ids = np.empty(total, dtype=np.int32)
    pos = 0
    for i, doc in enumerate(docs):
        n = len(doc)
        words[pos : pos + n] = np.asarray(doc, dtype=np.int32)
        doc_ids[pos : pos + n] = i
        pos += n
    if words.size and words.min() < 0:
        raise DataError("negative token id in corpus")
    return words, doc_ids, offsets


def init_state(
    docs: Sequence[Sequence[int]],
    hyper: Hyperparams,
    vocab_size: int | None = None,
    rng: np.random.Generator | None = None,
) -> GibbsState:
    """Assign every token a uniform random topic and tally the counts."""
    words, doc_ids, offsets = _flatten(docs)
    if vocab_size is None:
        vocab_size = int(words.max()) + 1
    elif words.max() >= vocab_size:
        raise DataError("token id exceeds vocab_size")
    if rng is None:
        rng = np.random.default_rng(hyper.seed)
    z = rng.integers(0, hyper.k, size=words.shape[0], dtype=np.int32)
    state = GibbsState.from_assignments(docs, z, hyper.k, vocab_size)
    return state


def conditional(state: GibbsState, hyper: Hyperparams, d: int, i: int) -> np.ndarray:
    """Full conditional over topics for token i of document d.

    The token's own assignment is excluded from the counts. The result
    is normalized and strictly positive.
    """
    lo = int(state.offsets[d])
    hi = int(state.offsets[d + 1])
    if not 0 <= i < hi - lo:
        raise DataError(f"position {i} out of range for document {d}")
    t = lo + i
    w = int(state.words[t])
    old = int(state.z[t])
    ndk = state.n_dk[d].astype(np.float64)
    nkw = state.n_kw[:, w].astype(np.float64)
    nk = state.n_k.astype(np.float64)
    ndk[old] -= 1.0
    nkw[old] -= 1.0
    nk[old] -= 1.0
    vbeta = state.vocab_size * hyper.beta
    p = (ndk + hyper.alpha_k) * (nkw + hyper.beta) / (nk + vbeta)
    return p / p.sum()


def gibbs_sweep(
    state: GibbsState, hyper: Hyperparams, rng: np.random.Generator
) -> GibbsState:
    """One full sweep: resample every token once, documents in order,
    positions in order. Mutates the state in place and returns it."""
    uniforms = rng.random(state.num_tokens)
    gibbs_sweep_kernel(
        state.words,
        state.doc_ids,
        state.z,
        state.n_dk,
        state.n_kw,
        state.n_k,
        hyper.alpha_k,
        hyper.beta,
        uniforms,
    )
    return state


def model_from_state(state: GibbsState, hyper: Hyperparams) -> TopicModel:
    """Read phi and theta off the current counts."""
    phi, theta = _estimates(state, hyper)
    return TopicModel(phi=phi, theta=theta, hyper=hyper)


def _estimates(state: GibbsState, hyper: Hyperparams) -> tuple[np.ndarray, np.ndarray]:
    vbeta = state.vocab_size * hyper.beta
    phi = (state.n_kw + hyper.beta) / (state.n_k[:, None] + vbeta)
    lengths = state.doc_lengths()
    theta = (state.n_dk + hyper.alpha_k) / (lengths[:, None] + hyper.alpha_sum)
    return phi, theta


def train_full(
    docs: Sequence[Sequence[int]],
    hyper: Hyperparams,
    vocab_size: int | None = None,
) -> tuple[TopicModel, GibbsState]:
    """Train and return both the model and the final sampler state.

    With samples=1 the estimate comes from the final state. With
    samples > 1 the estimate is the mean of phi and theta over
    `samples` states spaced `thinning` sweeps apart, the first taken
    right after the `iterations` burn-in sweeps.
    """
    rng = np.random.default_rng(hyper.seed)
    state = init_state(docs, hyper, vocab_size, rng)
    for _ in range(hyper.iterations):
        gibbs_sweep(state, hyper, rng)
    if hyper.samples == 1:
        return model_from_state(state, hyper), state
    phi_sum, theta_sum = _estimates(state, hyper)
    for _ in range(hyper.samples - 1):
        for _ in range(hyper.thinning):
            gibbs_sweep(state, hyper, rng)
        phi, theta = _estimates(state, hyper)
        phi_sum += phi
        theta_sum += theta
    model = TopicModel(
        phi=phi_sum / hyper.samples, theta=theta_sum / hyper.samples, hyper=hyper
    )
    return model, state


def train(
    docs: Sequence[Sequence[int]],
    hyper: Hyperparams,
    vocab_size: int | None = None,
) -> TopicModel:
    """Train a topic model; deterministic for a fixed seed."""
    model, _ = train_full(docs, hyper, vocab_size)
    return model


def top_words(
    model: TopicModel, k: int, n: int, words: Sequence[str] | None = None
) -> list[tuple]:
    """The n heaviest words of topic k, ties broken by ascending id.

    Returns (word_id, weight) pairs, or (word, weight) when a word list
    is supplied.
    """
    if not 0 <= k < model.num_topics:
        raise DataError(f"topic {k} out of range")
    row = model.phi[k]
    vocab_size = row.shape[0]
    order = np.lexsort((np.arange(vocab_size), -row))[: min(n, vocab_size)]
    if words is None:
        return [(int(i), float(row[i])) for i in order]
    return [(words[int(i)], float(row[i])) for i in order]


def generate_corpus(
    phi: np.ndarray,
    alpha,
    doc_count: int,
    mean_len: float,
    seed: int,
) -> tuple[list[np.ndarray], np.ndarray]:
    """Sample a synthetic corpus from the generative model.

    Per document: theta ~ Dirichlet(alpha), length ~ Poisson(mean_len)
    truncated to >= 1 by redrawing, each token draws a topic from theta
    and a word from that topic's row of phi. Returns the documents and
    the true theta matrix.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 2:
        raise DataError("phi must be a 2-d array")
    if np.any(phi < 0) or np.any(np.abs(phi.sum(axis=1) - 1.0) > 1e-9):
        raise DataError("phi rows must be distributions summing to 1")
    n_topics = phi.shape[0]
    alpha_vec = np.asarray(alpha, dtype=np.float64)
    if alpha_vec.ndim == 0:
        alpha_vec = np.full(n_topics, float(alpha_vec))
    if alpha_vec.shape != (n_topics,) or np.any(alpha_vec <= 0):
        raise DataError("alpha must be positive, scalar or length K")
    if doc_count < 1:
        raise DataError("doc_count must be >= 1")
    if mean_len <= 0:
        raise DataError("mean_len must be > 0")
    rng = np.random.default_rng(seed)
    cum_phi = np.cumsum(phi, axis=1)
    cum_phi[:, -1] = 1.0
    docs: list[np.ndarray] = []
    thetas = np.empty((doc_count, n_topics), dtype=np.float64)
    for d in range(doc_count):
        theta = rng.dirichlet(alpha_vec)
        thetas[d] = theta
        length = 0
        while length < 1:
            length = int(rng.poisson(mean_len))
        cum_theta = np.cumsum(theta)
        cum_theta[-1] = 1.0
        topics = np.searchsorted(cum_theta, rng.random(length), side="right")
        tokens = np.empty(length, dtype=np.int32)
        u = rng.random(length)
        for i in range(length):
            tokens[i] = np.searchsorted(cum_phi[topics[i]], u[i], side="right")
        docs.append(tokens)
    return docs, thetas
