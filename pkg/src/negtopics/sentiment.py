"""Lexicon-based sentiment scoring and negative-document filtering.

A lexicon is two word lists, positive and negative. A term ending in
'*' matches every token that starts with the stem; any other term
matches exactly. A document is Negative when it contains strictly more
negative than positive occurrences and at least one negative
occurrence; everything else is NonNegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .errors import DataError

NEGATIVE = "Negative"
NON_NEGATIVE = "NonNegative"


@dataclass(frozen=True)
class SentimentScore:
    pos_count: int
    neg_count: int

    @property
    def is_negative(self) -> bool:
        return self.neg_count > self.pos_count and self.neg_count >= 1

    @property
    def polarity(self) -> str:
        return NEGATIVE if self.is_negative else NON_NEGATIVE


def _split_terms(terms: Iterable[str], side: str) -> tuple[frozenset[str], tuple[str, ...]]:
    literals: set[str] = set()
    prefixes: set[str] = set()
    for term in terms:
        term = term.strip().lower()
        if not term:
            continue
        if term.endswith("*"):
            stem = term[:-1]
            if not stem or "*" in stem:
                raise DataError(f"bad wildcard term {term!r} in {side} lexicon")
            prefixes.add(stem)
        else:
            if "*" in term:
                raise DataError(f"bad wildcard term {term!r} in {side} lexicon")
            literals.add(term)
    return frozenset(literals), tuple(sorted(prefixes))


class SentimentLexicon:
    """Positive and negative term lists with trailing-'*' wildcards.

    The two sides must not overlap once wildcards are taken into
    account: a term of one polarity that another polarity's term can
    match makes every score ambiguous, so the lexicon is rejected.
    """

    def __init__(self, positive: Iterable[str], negative: Iterable[str]):
        self.pos_literals, self.pos_prefixes = _split_terms(positive, "positive")
        self.neg_literals, self.neg_prefixes = _split_terms(negative, "negative")
        if not self.neg_literals and not self.neg_prefixes:
            raise DataError("negative lexicon is empty")
        self._check_disjoint()

    def _check_disjoint(self) -> None:
        for term in sorted(self.pos_literals & self.neg_literals):
            raise DataError(f"term {term!r} appears in both lexicons")
        for lit in sorted(self.pos_literals):
            for stem in self.neg_prefixes:
                if lit.startswith(stem):
                    raise DataError(
                        f"positive term {lit!r} collides with negative wildcard {stem + '*'!r}"
                    )
        for lit in sorted(self.neg_literals):
            for stem in self.pos_prefixes:
                if lit.startswith(stem):
                    raise DataError(
                        f"negative term {lit!r} collides with positive wildcard {stem + '*'!r}"
                    )
        for p in self.pos_prefixes:
            for n in self.neg_prefixes:
                if p.startswith(n) or n.startswith(p):
                    raise DataError(
                        f"wildcards {p + '*'!r} and {n + '*'!r} overlap across lexicons"
                    )

    def matches_positive(self, token: str) -> bool:
        return token in self.pos_literals or (
            bool(self.pos_prefixes) and token.startswith(self.pos_prefixes)
        )

    def matches_negative(self, token: str) -> bool:
        return token in self.neg_literals or (
            bool(self.neg_prefixes) and token.startswith(self.neg_prefixes)
        )


def _read_terms(source: str | Path | IO[str]) -> list[str]:
    from .corpus import _iter_lines

    terms = []
    for line in _iter_lines(source):
        line = line.split("#", 1)[0].strip()
        if line:
            terms.append(line)
    return terms


def load_lexicon(
    positive_source: str | Path | IO[str], negative_source: str | Path | IO[str]
) -> SentimentLexicon:
    """Load a lexicon from two term files: one term per line, '#' comments.

    Duplicate terms collapse silently; cross-polarity overlaps are fatal.
    """
    return SentimentLexicon(_read_terms(positive_source), _read_terms(negative_source))


def score_document(tokens: Sequence[str], lexicon: SentimentLexicon) -> SentimentScore:
    """Count lexicon occurrences; each token feeds at most one counter."""
    pos = 0
    neg = 0
    for tok in tokens:
        if lexicon.matches_negative(tok):
            neg += 1
        elif lexicon.matches_positive(tok):
            pos += 1
    return SentimentScore(pos, neg)


@dataclass(frozen=True)
class SentimentStats:
    total: int
    negative: int

    @property
    def fraction(self) -> float:
        return self.negative / self.total if self.total else 0.0

    def as_dict(self) -> dict:
        return {"total": self.total, "negative": self.negative, "fraction": self.fraction}


def _words_of(doc) -> Sequence[str]:
    return doc.words if hasattr(doc, "words") else doc


def filter_negative(docs: Sequence, lexicon: SentimentLexicon) -> tuple[list, SentimentStats]:
    """Keep the documents scored Negative, in their original order.

    docs may be WordDocument records or plain token sequences; the
    returned list holds the same objects that were passed in.
    """
    kept = [d for d in docs if score_document(_words_of(d), lexicon).is_negative]
    return kept, SentimentStats(total=len(docs), negative=len(kept))
