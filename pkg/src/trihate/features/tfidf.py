"""TF-IDF document vectors.

The default IDF is the literal ratio N/df (no logarithm); a smoothed-log
variant ln((1+N)/(1+df)) + 1 sits behind ``IdfMode.LOG`` for callers that
prefer the conventional damping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse

from ..errors import DataError


class IdfMode(Enum):
    LITERAL = "literal"
    LOG = "log"


@dataclass
class Vocabulary:
    index: dict[str, int] = field(default_factory=dict)
    tokens: list[str] = field(default_factory=list)
    document_frequency: dict[str, int] = field(default_factory=dict)
    document_count: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def token_at(self, idx: int) -> str:
        return self.tokens[idx]


def build_vocabulary(documents: Sequence[Sequence[str]]) -> Vocabulary:
    """Index tokens in first-appearance order and count document frequency."""
    vocab = Vocabulary(document_count=len(documents))
    for doc in documents:
        seen = set()
        for token in doc:
            if token not in vocab.index:
                vocab.index[token] = len(vocab.tokens)
                vocab.tokens.append(token)
            if token not in seen:
                vocab.document_frequency[token] = vocab.document_frequency.get(token, 0) + 1
                seen.add(token)
    return vocab


def term_frequency(term: str, document: Sequence[str]) -> float:
    """Occurrences of ``term`` divided by document length."""
    if not document:
        raise DataError("term_frequency: empty document")
    return sum(1 for t in document if t == term) / len(document)


def inverse_document_frequency(
    term: str,
    vocabulary: Vocabulary,
    corpus_size: int | None = None,
    mode: IdfMode = IdfMode.LITERAL,
) -> float:
    n = vocabulary.document_count if corpus_size is None else corpus_size
    df = vocabulary.document_frequency.get(term, 0)
    if df < 1:
        raise DataError(f"inverse_document_frequency: term {term!r} has zero document frequency")
    if mode is IdfMode.LITERAL:
        return n / df
    return math.log((1 + n) / (1 + df)) + 1.0


@dataclass
class FeatureMatrix:
    """Documents x vocabulary sparse matrix with row-to-tweet-id mapping."""

    matrix: sparse.csr_matrix
    row_ids: list[str]
    vocabulary: Vocabulary

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def export_triplets(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        coo = self.matrix.tocoo()
        with path.open("w", encoding="utf-8") as fh:
            fh.write("row,col,value\n")
            order = np.lexsort((coo.col, coo.row))
            for k in order:
                fh.write(f"{coo.row[k]},{coo.col[k]},{coo.data[k]:.12g}\n")


def tfidf_matrix(
    documents: Sequence[Sequence[str]],
    row_ids: Sequence[str],
    vocabulary: Vocabulary,
    mode: IdfMode = IdfMode.LITERAL,
) -> FeatureMatrix:
    """Cell = TF x IDF; tokens outside the vocabulary are dropped; empty
    documents produce all-zero rows."""
    if len(documents) != len(row_ids):
        raise DataError("tfidf_matrix: documents and row_ids differ in length")
    idf = {
        token: inverse_document_frequency(token, vocabulary, mode=mode)
        for token in vocabulary.tokens
    }
    rows: list[int] = []
    cols: list[int] = []
    values: list[float] = []
    for row, doc in enumerate(documents):
        known = [t for t in doc if t in vocabulary]
        if not known:
            continue
        counts: dict[str, int] = {}
        for token in known:
            counts[token] = counts.get(token, 0) + 1
        length = len(doc)
        for token, count in counts.items():
            rows.append(row)
            cols.append(vocabulary.index[token])
            values.append((count / length) * idf[token])
    matrix = sparse.csr_matrix(
        (values, (rows, cols)), shape=(len(documents), len(vocabulary)), dtype=np.float64
    )
    if not np.all(np.isfinite(matrix.data)):
        raise DataError("tfidf_matrix: non-finite value produced")
    return FeatureMatrix(matrix=matrix, row_ids=list(row_ids), vocabulary=vocabulary)
