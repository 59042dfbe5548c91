"""negtopics: topic mining over negative-sentiment short texts.

The library covers the full path from raw JSON Lines corpora to a
labeled topic report: tokenization and vocabulary construction
(corpus), lexicon sentiment filtering (sentiment), collapsed Gibbs LDA
(lda), held-out topic-count selection (model_selection), seed-word
labeling and the category relationship graph (labeling), and the batch
pipeline with its command line (pipeline, cli).
"""

__version__ = "0.1.0"

from .corpus import (
    IngestResult,
    QuerySet,
    RawDocument,
    TokenizedDocument,
    TokenizerRules,
    Vocabulary,
    WordDocument,
    build_vocabulary,
    clean_document,
    ingest,
    load_queries,
    load_stopwords,
    match_queries,
    remove_stopwords,
    tokenize,
)
from .errors import ConfigError, DataError
from .labeling import (
    NON_HEALTH,
    Attachment,
    CategoryGraph,
    Edge,
    SeedLexicon,
    TopicSummary,
    attach_subtopics,
    build_relationship_graph,
    build_summaries,
    label_topic,
    load_seed_lexicon,
)
from .lda import (
    GibbsState,
    Hyperparams,
    TopicModel,
    conditional,
    generate_corpus,
    gibbs_sweep,
    init_state,
    model_from_state,
    top_words,
    train,
    train_full,
)
from .model_selection import (
    EvalConfig,
    EvalResult,
    SplitSpec,
    best_k,
    heldout_loglik,
    select_k,
    split_corpus,
)
from .sentiment import (
    SentimentLexicon,
    SentimentScore,
    SentimentStats,
    filter_negative,
    load_lexicon,
    score_document,
)

__all__ = [
    "__version__",
    "ConfigError",
    "DataError",
    "RawDocument",
    "TokenizerRules",
    "WordDocument",
    "TokenizedDocument",
    "IngestResult",
    "QuerySet",
    "Vocabulary",
    "ingest",
    "tokenize",
    "load_stopwords",
    "remove_stopwords",
    "load_queries",
    "match_queries",
    "clean_document",
    "build_vocabulary",
    "SentimentLexicon",
    "SentimentScore",
    "SentimentStats",
    "load_lexicon",
    "score_document",
    "filter_negative",
    "Hyperparams",
    "GibbsState",
    "TopicModel",
    "init_state",
    "conditional",
    "gibbs_sweep",
    "train",
    "train_full",
    "model_from_state",
    "top_words",
    "generate_corpus",
    "SplitSpec",
    "EvalConfig",
    "EvalResult",
    "split_corpus",
    "heldout_loglik",
    "select_k",
    "best_k",
    "SeedLexicon",
    "TopicSummary",
    "Attachment",
    "CategoryGraph",
    "Edge",
    "NON_HEALTH",
    "label_topic",
    "build_summaries",
    "attach_subtopics",
    "build_relationship_graph",
    "load_seed_lexicon",
]
