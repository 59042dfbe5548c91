from io import StringIO

import numpy as np
import pytest

from negtopics.corpus import WordDocument
from negtopics.errors import DataError
from negtopics.sentiment import (
    SentimentLexicon,
    SentimentScore,
    filter_negative,
    load_lexicon,
    score_document,
)

from oracles import brute_force_score


# ------------------------------------------------------------------ loading


def test_load_lexicon_counts_terms():
    lex = load_lexicon(StringIO("love\n"), StringIO("hate\npiss*\n"))
    assert lex.pos_literals == {"love"}
    assert lex.neg_literals == {"hate"}
    assert lex.neg_prefixes == ("piss",)


def test_load_lexicon_overlap_is_fatal():
    with pytest.raises(DataError, match="bad"):
        load_lexicon(StringIO("bad\n"), StringIO("bad\n"))


def test_load_lexicon_collapses_duplicates():
    lex = load_lexicon(StringIO("fine\n"), StringIO("sad\nsad\n"))
    assert lex.neg_literals == {"sad"}


def test_load_lexicon_comments_and_case():
    lex = load_lexicon(StringIO("# header\nGOOD\n"), StringIO("Bad  # inline\n"))
    assert lex.pos_literals == {"good"}
    assert lex.neg_literals == {"bad"}


def test_literal_conflicting_with_other_side_wildcard_is_fatal():
    with pytest.raises(DataError, match="piss"):
        SentimentLexicon(["pissed"], ["piss*"])
    with pytest.raises(DataError, match="grea"):
        SentimentLexicon(["grea*"], ["great"])


def test_overlapping_wildcards_across_sides_are_fatal():
    with pytest.raises(DataError):
        SentimentLexicon(["car*"], ["care*"])


def test_same_side_literal_and_wildcard_allowed():
    lex = SentimentLexicon(["love"], ["piss*", "pissed"])
    assert lex.matches_negative("pissed")


def test_empty_negative_lexicon_is_fatal():
    with pytest.raises(DataError):
        SentimentLexicon(["love"], [])


def test_bad_wildcard_terms_are_fatal():
    with pytest.raises(DataError):
        SentimentLexicon([], ["*"])
    with pytest.raises(DataError):
        SentimentLexicon([], ["pi*ss"])


# ------------------------------------------------------------------ scoring


def test_score_single_negative_word():
    lex = SentimentLexicon([], ["hate"])
    score = score_document(["hate", "diet"], lex)
    assert (score.pos_count, score.neg_count) == (0, 1)
    assert score.polarity == "Negative"


def test_score_prefix_match():
    lex = SentimentLexicon([], ["piss*"])
    score = score_document(["pissed", "off"], lex)
    assert (score.pos_count, score.neg_count) == (0, 1)
    assert score.is_negative


def test_score_tie_is_not_negative():
    lex = SentimentLexicon(["good"], ["bad"])
    score = score_document(["good", "bad"], lex)
    assert (score.pos_count, score.neg_count) == (1, 1)
    assert score.polarity == "NonNegative"


def test_score_empty_document():
    lex = SentimentLexicon([], ["bad"])
    score = score_document([], lex)
    assert (score.pos_count, score.neg_count) == (0, 0)
    assert not score.is_negative


def test_token_matching_literal_and_prefix_counts_once():
    lex = SentimentLexicon([], ["pissed", "piss*"])
    assert score_document(["pissed"], lex).neg_count == 1


def test_repeated_tokens_count_per_occurrence():
    lex = SentimentLexicon([], ["bad"])
    assert score_document(["bad", "bad", "bad"], lex).neg_count == 3


def test_negative_requires_at_least_one_hit():
    assert not SentimentScore(pos_count=0, neg_count=0).is_negative


def test_appending_negative_token_never_lowers_neg_count():
    lex = SentimentLexicon(["glad*"], ["sad", "fail*"])
    rng = np.random.default_rng(17)
    pool = ["sad", "failed", "glad", "walk", "run", "gym"]
    for _ in range(200):
        tokens = [pool[i] for i in rng.integers(len(pool), size=rng.integers(8))]
        before = score_document(tokens, lex).neg_count
        after = score_document(tokens + ["sad"], lex).neg_count
        assert after == before + 1


def test_score_matches_brute_force_oracle():
    pos_terms = ["happ*", "good", "love"]
    neg_terms = ["sad", "hate*", "fail*"]
    lex = SentimentLexicon(pos_terms, neg_terms)
    pool = ["happy", "happier", "good", "love", "lover", "sad", "hate",
            "hated", "fail", "failing", "walk", "gym", "go", "sa", "hat"]
    rng = np.random.default_rng(23)
    for _ in range(500):
        tokens = [pool[i] for i in rng.integers(len(pool), size=rng.integers(12))]
        score = score_document(tokens, lex)
        assert (score.pos_count, score.neg_count) == brute_force_score(
            tokens, pos_terms, neg_terms
        )


# ---------------------------------------------------------------- filtering


def test_filter_negative_counts_and_fraction():
    lex = SentimentLexicon(["good"], ["bad"])
    docs = [
        ["bad"],                    # negative
        ["good"],                   # positive
        ["bad", "bad", "good"],     # negative
        ["good", "bad"],            # tie
        ["walk"],                   # no hits
        ["bad", "walk"],            # negative
        ["good", "good", "bad"],
        ["bad", "gym"],             # negative
        [],
        ["walk", "gym"],
    ]
    kept, stats = filter_negative(docs, lex)
    assert len(kept) == 4
    assert stats.total == 10
    assert stats.negative == 4
    assert stats.fraction == pytest.approx(0.4)


def test_filter_negative_empty_docs():
    lex = SentimentLexicon([], ["bad"])
    kept, stats = filter_negative([[], [], []], lex)
    assert kept == []
    assert stats.negative == 0
    assert stats.fraction == 0.0


def test_filter_negative_recovers_planted_documents():
    """Plant one negative word in a known subset; exactly it survives."""
    lex = SentimentLexicon(["nice"], ["awful", "dread*"])
    rng = np.random.default_rng(31)
    neutral = ["walk", "gym", "run", "food", "sleep"]
    docs = []
    planted = set()
    for i in range(300):
        tokens = [neutral[j] for j in rng.integers(len(neutral), size=5)]
        if rng.random() < 0.3:
            tokens.insert(int(rng.integers(len(tokens) + 1)), "awful")
            planted.add(f"d{i}")
        docs.append(WordDocument(f"d{i}", tuple(tokens)))
    kept, stats = filter_negative(docs, lex)
    assert {d.id for d in kept} == planted
    assert stats.negative == len(planted)


def test_filter_negative_preserves_order_and_identity():
    lex = SentimentLexicon([], ["bad"])
    docs = [
        WordDocument("a", ("bad",)),
        WordDocument("b", ("fine",)),
        WordDocument("c", ("bad", "bad")),
    ]
    kept, _ = filter_negative(docs, lex)
    assert [d.id for d in kept] == ["a", "c"]
    assert kept[0] is docs[0]


def test_filter_output_satisfies_negative_rule():
    lex = SentimentLexicon(["good", "lucky"], ["bad", "sad"])
    rng = np.random.default_rng(41)
    pool = ["good", "lucky", "bad", "sad", "walk"]
    docs = [[pool[i] for i in rng.integers(len(pool), size=rng.integers(9))]
            for _ in range(400)]
    kept, _ = filter_negative(docs, lex)
    kept_ids = {id(d) for d in kept}
    for doc in docs:
        score = score_document(doc, lex)
        assert (id(doc) in kept_ids) == score.is_negative


def test_stats_as_dict():
    lex = SentimentLexicon([], ["bad"])
    _, stats = filter_negative([["bad"], ["ok"]], lex)
    assert stats.as_dict() == {"total": 2, "negative": 1, "fraction": 0.5}
