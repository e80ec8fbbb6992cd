"""Corpus screening pipeline and decision-tree ethics-guideline engine.

Two halves: a text pipeline (tokenize, n-grams, LDA topics, keyword
screening, topic/category assignment) and a guideline engine (parse, lint,
walk, report) with an HTTP service for interactive walkthroughs.
"""

from .classify import AssignRules, Assignment, assign_categories, assign_document, assign_topics, category_counts
from .corpus import (
    BowDoc,
    Document,
    TokenizerConfig,
    Vocabulary,
    build_vocabulary,
    extract_ngrams,
    load_corpus,
    load_stopwords,
    to_bow,
    tokenize,
)
from .errors import (
    EthicsTriageError,
    FingerprintMismatch,
    IngestionError,
    ManifestParseError,
    ValidationError,
)
from .screening import KeywordRules, ScreenFlags, ScreenSummary, combine_flags, keyword_screen, screen_document
from .topics import (
    CategoryMap,
    LdaConfig,
    TopicModel,
    apply_category_map,
    infer_doc_topics,
    load_model,
    log_likelihood,
    save_model,
    top_words,
    train_lda,
)

__version__ = "0.1.0"
