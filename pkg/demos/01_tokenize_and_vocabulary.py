"""
Cleaning raw posts into a vocabulary
====================================

Walks a handful of raw social-media style posts through the cleaning
chain: tokenize, drop stop words, tag category queries, then build the
id-mapped vocabulary that the topic model consumes.
"""

from negtopics.corpus import (
    RawDocument,
    TokenizerRules,
    build_vocabulary,
    clean_document,
    load_queries,
    load_stopwords,
    tokenize,
)
from negtopics.artifacts import open_text

rules = TokenizerRules()

# URLs, @mentions and the # of hashtags disappear; case folds away.
for text in (
    "Skipping my workout AGAIN... http://t.co/abc #lazy",
    "Diet starts Monday!! @coach said so",
    "OBESITY-related risk factors",
):
    print(f"{text!r:55} -> {tokenize(text, rules)}")

stopwords = load_stopwords(open_text(None, "stopwords_en.txt"))
queries = load_queries(open_text(None, "queries_default.txt"))
print("\nquery categories:", ", ".join(queries.categories))

docs = [
    RawDocument(id="p1", text="my diabetes is acting up and i hate it"),
    RawDocument(id="p2", text="new diet plus gym every day #diet"),
    RawDocument(id="p3", text="the the the"),
]
cleaned = [clean_document(d, rules, stopwords, queries) for d in docs]
for c in cleaned:
    print(f"{c.id}: words={list(c.words)} categories={sorted(c.categories)}")

# p3 came out empty, so a real ingest run would drop it. Vocabulary ids
# are assigned by descending frequency with lexicographic tie breaks.
vocab, encoded, dropped = build_vocabulary([c for c in cleaned if c.words], min_count=1)
print(f"\nvocabulary of {len(vocab)} words, {dropped} documents dropped")
for word in vocab.words:
    print(f"  id {vocab.id(word)}: {word!r} (count {vocab.counts[vocab.id(word)]})")
print("first encoded doc:", encoded[0].tokens)
