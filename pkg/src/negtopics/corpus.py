"""Corpus ingestion, tokenization, and vocabulary construction.

Input corpora are JSON Lines files, one object per line, with required
string fields "id" and "text" and optional "lang" and "created_at".
Cleaning turns each record into a list of word tokens; the vocabulary
then maps the surviving words onto dense integer ids for the sampler.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from hashlib import sha256
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigError, DataError

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"#?\w+")


@dataclass(frozen=True)
class RawDocument:
    """One input record, as read from the corpus file."""

    id: str
    text: str
    lang: str | None = None
    created_at: str | None = None


@dataclass(frozen=True)
class TokenizerRules:
    """Cleaning switches, applied in declaration order.

    min_token_len is measured on the final token string, after any
    hashtag folding and lowercasing.
    """

    lowercase: bool = True
    strip_urls: bool = True
    strip_mentions: bool = True
    fold_hashtags: bool = True
    min_token_len: int = 2

    def __post_init__(self) -> None:
        if self.min_token_len < 1:
            raise ConfigError("min_token_len must be >= 1")

    def as_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_urls": self.strip_urls,
            "strip_mentions": self.strip_mentions,
            "fold_hashtags": self.fold_hashtags,
            "min_token_len": self.min_token_len,
        }


@dataclass(frozen=True)
class WordDocument:
    """A cleaned document: word tokens plus any matched categories."""

    id: str
    words: tuple[str, ...]
    categories: frozenset[str] = frozenset()


@dataclass(frozen=True, eq=False)
class TokenizedDocument:
    """A document encoded as dense vocabulary ids."""

    id: str
    tokens: np.ndarray
    categories: frozenset[str] = frozenset()


@dataclass
class IngestResult:
    documents: list[RawDocument]
    malformed: int
    skipped_lang: int


def _parse_record(line: str) -> RawDocument | None:
    """Parse one corpus line; None means the line is malformed."""
    try:
        obj = json.loads(line)
    except ValueError:
        return None
    if not isinstance(obj, dict):
        return None
    doc_id = obj.get("id")
    text = obj.get("text")
    if not isinstance(doc_id, str) or not doc_id:
        return None
    if not isinstance(text, str):
        return None
    lang = obj.get("lang")
    created_at = obj.get("created_at")
    if lang is not None and not isinstance(lang, str):
        return None
    if created_at is not None and not isinstance(created_at, str):
        return None
    return RawDocument(doc_id, text, lang, created_at)


def _iter_lines(source: str | Path | IO[str]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        try:
            handle = open(source, "r", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read corpus file {source}: {exc}") from exc
        with handle:
            yield from handle
    else:
        yield from source


def ingest(source: str | Path | IO[str], lang_filter: str | None = None) -> IngestResult:
    """Read a JSON Lines corpus into RawDocument records.

    Malformed lines are counted and skipped. Records whose "lang" field
    is present and differs from lang_filter are skipped. If more than
    half of the non-blank lines are malformed the file is rejected,
    since that signals the wrong input format rather than noise.
    """
    documents: list[RawDocument] = []
    malformed = 0
    skipped_lang = 0
    total = 0
    for line in _iter_lines(source):
        if not line.strip():
            continue
        total += 1
        doc = _parse_record(line)
        if doc is None:
            malformed += 1
            continue
        if lang_filter is not None and doc.lang is not None and doc.lang != lang_filter:
            skipped_lang += 1
            continue
        documents.append(doc)
    if total > 0 and malformed * 2 > total:
        raise DataError(
            f"{malformed} of {total} lines are malformed; "
            "input does not look like a JSON Lines corpus"
        )
    return IngestResult(documents, malformed, skipped_lang)


def tokenize(text: str, rules: TokenizerRules = TokenizerRules()) -> list[str]:
    """Split text into word tokens under the given rules.

    URLs and @mentions are removed as whole units before splitting, so
    their fragments never leak into the token stream. Tokens are runs
    of word characters with an optional leading '#'; all other
    punctuation separates tokens.
    """
    if rules.strip_urls:
        text = _URL_RE.sub(" ", text)
    if rules.strip_mentions:
        text = _MENTION_RE.sub(" ", text)
    out = []
    for tok in _TOKEN_RE.findall(text):
        if tok.startswith("#") and rules.fold_hashtags:
            tok = tok[1:]
        if rules.lowercase:
            tok = tok.lower()
        if len(tok) >= rules.min_token_len:
            out.append(tok)
    return out


def load_stopwords(source: str | Path | IO[str]) -> frozenset[str]:
    """Load a stop-word file: one word per line, '#' starts a comment."""
    words = set()
    for line in _iter_lines(source):
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return frozenset(words)


def remove_stopwords(tokens: Sequence[str], stopwords: Iterable[str]) -> list[str]:
    """Drop stop words, preserving the order of the remaining tokens."""
    if not isinstance(stopwords, (set, frozenset)):
        stopwords = frozenset(stopwords)
    return [t for t in tokens if t not in stopwords]


class QuerySet:
    """Named categories, each with the tokens that select it.

    A term with a leading '#' also matches the bare token and vice
    versa, so '#diet' and 'diet' select the same category whether or
    not hashtags are folded during tokenization.
    """

    def __init__(self, categories: dict[str, Sequence[str]]):
        if not categories:
            raise DataError("query set has no categories")
        self.categories: dict[str, tuple[str, ...]] = {}
        self._by_token: dict[str, frozenset[str]] = {}
        by_token: dict[str, set[str]] = {}
        for name, terms in categories.items():
            terms = tuple(t.lower() for t in terms)
            if not terms:
                raise DataError(f"query category {name!r} has no terms")
            self.categories[name] = terms
            for term in terms:
                variants = {term}
                if term.startswith("#"):
                    variants.add(term[1:])
                else:
                    variants.add("#" + term)
                for v in variants:
                    if v:
                        by_token.setdefault(v, set()).add(name)
        self._by_token = {t: frozenset(c) for t, c in by_token.items()}

    def match(self, tokens: Iterable[str]) -> frozenset[str]:
        found: set[str] = set()
        for tok in tokens:
            cats = self._by_token.get(tok)
            if cats:
                found |= cats
        return frozenset(found)


def load_queries(source: str | Path | IO[str]) -> QuerySet:
    """Load a query-set file: '[Category]' headers, one term per line."""
    categories: dict[str, list[str]] = {}
    current: list[str] | None = None
    for line in _iter_lines(source):
        line = line.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise DataError("query set has an empty category name")
            if name in categories:
                raise DataError(f"duplicate query category {name!r}")
            current = categories.setdefault(name, [])
        else:
            if current is None:
                raise DataError(f"query term {line!r} appears before any category header")
            current.append(line)
    return QuerySet(categories)


def match_queries(tokens: Sequence[str], query_set: QuerySet) -> frozenset[str]:
    """Return the categories whose terms occur in the token list."""
    return query_set.match(tokens)


def clean_document(
    doc: RawDocument,
    rules: TokenizerRules,
    stopwords: frozenset[str],
    queries: QuerySet | None = None,
) -> WordDocument:
    """Tokenize, remove stop words, then tag categories, in that order."""
    tokens = remove_stopwords(tokenize(doc.text, rules), stopwords)
    cats = queries.match(tokens) if queries is not None else frozenset()
    return WordDocument(doc.id, tuple(tokens), frozenset(cats))


class Vocabulary:
    """Bijection between words and dense ids 0..V-1.

    Ids are assigned by descending corpus frequency, ties broken by
    lexicographic word order, so equal corpora always produce equal
    vocabularies. counts[i] is the corpus frequency of word i at build
    time, before any document was dropped.
    """

    __slots__ = ("words", "counts", "_index")

    def __init__(self, words: Sequence[str], counts: Sequence[int]):
        self.words: list[str] = list(words)
        self.counts: list[int] = [int(c) for c in counts]
        if not self.words:
            raise DataError("vocabulary is empty")
        if len(self.words) != len(self.counts):
            raise DataError("vocabulary words and counts differ in length")
        self._index = {w: i for i, w in enumerate(self.words)}
        if len(self._index) != len(self.words):
            raise DataError("vocabulary contains duplicate words")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def id(self, word: str) -> int:
        return self._index[word]

    def word(self, word_id: int) -> str:
        return self.words[word_id]

    def encode(self, words: Iterable[str]) -> np.ndarray:
        """Map words to ids; unknown words become -1."""
        idx = self._index
        return np.fromiter(
            (idx.get(w, -1) for w in words), dtype=np.int32
        )

    def content_hash(self) -> str:
        h = sha256()
        for word, count in zip(self.words, self.counts):
            h.update(word.encode("utf-8"))
            h.update(b"\t")
            h.update(str(count).encode("ascii"))
            h.update(b"\n")
        return h.hexdigest()


def _as_word_doc(doc, position: int) -> WordDocument:
    if isinstance(doc, WordDocument):
        return doc
    return WordDocument(str(position), tuple(doc), frozenset())


def build_vocabulary(
    docs: Sequence, min_count: int = 5
) -> tuple[Vocabulary, list[TokenizedDocument], int]:
    """Build the vocabulary and encode the documents with it.

    docs may be WordDocument records or plain sequences of word
    strings. Words with corpus frequency below min_count are pruned;
    documents left empty by pruning are dropped. Returns the
    vocabulary, the encoded documents, and the dropped-document count.
    """
    if min_count < 1:
        raise ConfigError("min_count must be >= 1")
    word_docs = [_as_word_doc(d, i) for i, d in enumerate(docs)]
    freq: Counter[str] = Counter()
    for doc in word_docs:
        freq.update(doc.words)
    kept = sorted(
        ((w, c) for w, c in freq.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    if not kept:
        raise DataError(
            f"no word reaches min_count={min_count}; vocabulary would be empty"
        )
    vocab = Vocabulary([w for w, _ in kept], [c for _, c in kept])
    index = vocab._index
    encoded: list[TokenizedDocument] = []
    dropped_empty = 0
    for doc in word_docs:
        ids = [index[w] for w in doc.words if w in index]
        if not ids:
            dropped_empty += 1
            continue
        encoded.append(
            TokenizedDocument(doc.id, np.asarray(ids, dtype=np.int32), doc.categories)
        )
    if not encoded:
        raise DataError("all documents are empty after vocabulary pruning")
    return vocab, encoded, dropped_empty
