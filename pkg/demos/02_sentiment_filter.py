"""
Keeping only the negative documents
===================================
"""

from negtopics.artifacts import open_text
from negtopics.corpus import WordDocument
from negtopics.sentiment import filter_negative, load_lexicon, score_document

# The packaged word lists mark terms like "hate" and stems like
# "depress*". A document is Negative when strictly more of its tokens
# match the negative list than the positive one.
lexicon = load_lexicon(
    open_text(None, "lexicon_positive.txt"),
    open_text(None, "lexicon_negative.txt"),
)

for words in (
    ["i", "hate", "mondays"],
    ["happy", "about", "nothing", "sad"],        # 1 vs 1 is a tie
    ["depressed", "and", "tired", "and", "angry"],
    ["great", "workout", "today"],
):
    s = score_document(words, lexicon)
    print(f"{' '.join(words)!r:45} pos={s.pos_count} neg={s.neg_count} -> {s.polarity}")

docs = [
    WordDocument("a", ("hate", "this", "diet")),
    WordDocument("b", ("love", "this", "diet")),
    WordDocument("c", ("awful", "terrible", "nice")),
    WordDocument("d", ("plain", "report", "text")),
]
kept, stats = filter_negative(docs, lexicon)
print(f"\nkept {stats.negative} of {stats.total} documents "
      f"(fraction {stats.fraction:.2f}): {[d.id for d in kept]}")
