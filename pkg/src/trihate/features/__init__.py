from .tfidf import (
    FeatureMatrix,
    IdfMode,
    Vocabulary,
    build_vocabulary,
    inverse_document_frequency,
    term_frequency,
    tfidf_matrix,
)
from .fasttext import NgramTable, build_ngram_table, fasttext_embed, word_ngrams
from .glove import CooccurrenceMatrix, GloveParams, build_cooccurrence, glove_cost, glove_grad, glove_train

__all__ = [
    "CooccurrenceMatrix",
    "FeatureMatrix",
    "GloveParams",
    "IdfMode",
    "NgramTable",
    "Vocabulary",
    "build_cooccurrence",
    "build_ngram_table",
    "build_vocabulary",
    "fasttext_embed",
    "glove_cost",
    "glove_grad",
    "glove_train",
    "inverse_document_frequency",
    "term_frequency",
    "tfidf_matrix",
    "word_ngrams",
]
