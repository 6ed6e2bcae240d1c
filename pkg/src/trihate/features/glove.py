"""Co-occurrence counting and GloVe embedding training.

The objective is the weighted least-squares sum over nonzero co-occurrence
cells: f(X_ij) (v_i . w_j + b_i + c_j - ln X_ij)^2, with the capped power
weighting f(x) = (x / x_max)^alpha for x < x_max, else 1. Training is
Adagrad over cells in a seed-fixed shuffling schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tfidf import Vocabulary, build_vocabulary
from ..errors import DataError


@dataclass
class CooccurrenceMatrix:
    vocabulary: Vocabulary
    cells: dict[tuple[int, int], float] = field(default_factory=dict)
    window: int = 5
    weighting: str = "1/d within window"

    def nonzero(self) -> list[tuple[int, int, float]]:
        return [(i, j, x) for (i, j), x in sorted(self.cells.items())]

    def value(self, i: int, j: int) -> float:
        return self.cells.get((i, j), 0.0)


def build_cooccurrence(
    documents: Sequence[Sequence[str]],
    window: int = 5,
    vocabulary: Vocabulary | None = None,
    distance_weighting: bool = True,
) -> CooccurrenceMatrix:
    """Symmetric within-window counts per document, weighted 1/d by distance.

    The diagonal is zero by definition: pairs of the same word type are
    skipped even at distance >= 1.
    """
    if window < 1:
        raise DataError(f"window must be >= 1, got {window}")
    if vocabulary is None:
        vocabulary = build_vocabulary(documents)
    cells: dict[tuple[int, int], float] = {}
    for doc in documents:
        ids = [vocabulary.index[t] for t in doc if t in vocabulary]
        for pos, i in enumerate(ids):
            for offset in range(1, window + 1):
                if pos + offset >= len(ids):
                    break
                j = ids[pos + offset]
                if i == j:
                    continue
                weight = 1.0 / offset if distance_weighting else 1.0
                cells[(i, j)] = cells.get((i, j), 0.0) + weight
                cells[(j, i)] = cells.get((j, i), 0.0) + weight
    return CooccurrenceMatrix(vocabulary=vocabulary, cells=cells, window=window)


@dataclass
class GloveParams:
    word_vectors: np.ndarray       # V x d
    context_vectors: np.ndarray    # V x d
    word_bias: np.ndarray          # V
    context_bias: np.ndarray       # V
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    epochs: int = 0
    seed: int = 0

    def embedding(self, idx: int) -> np.ndarray:
        """Conventional final embedding: word plus context vector."""
        return self.word_vectors[idx] + self.context_vectors[idx]


def _weight(x: float, x_max: float, alpha: float) -> float:
    return (x / x_max) ** alpha if x < x_max else 1.0


def glove_cost(matrix: CooccurrenceMatrix, params: GloveParams) -> float:
    total = 0.0
    for i, j, x in matrix.nonzero():
        if x <= 0:
            continue
        residual = (
            float(params.word_vectors[i] @ params.context_vectors[j])
            + params.word_bias[i]
            + params.context_bias[j]
            - np.log(x)
        )
        total += _weight(x, params.x_max, params.alpha) * residual * residual
    return total


def glove_grad(matrix: CooccurrenceMatrix, params: GloveParams) -> dict[str, np.ndarray]:
    """Exact full-batch gradient of glove_cost for every parameter array."""
    g_w = np.zeros_like(params.word_vectors)
    g_c = np.zeros_like(params.context_vectors)
    g_bw = np.zeros_like(params.word_bias)
    g_bc = np.zeros_like(params.context_bias)
    for i, j, x in matrix.nonzero():
        if x <= 0:
            continue
        residual = (
            float(params.word_vectors[i] @ params.context_vectors[j])
            + params.word_bias[i]
            + params.context_bias[j]
            - np.log(x)
        )
        coef = 2.0 * _weight(x, params.x_max, params.alpha) * residual
        g_w[i] += coef * params.context_vectors[j]
        g_c[j] += coef * params.word_vectors[i]
        g_bw[i] += coef
        g_bc[j] += coef
    return {"word_vectors": g_w, "context_vectors": g_c, "word_bias": g_bw, "context_bias": g_bc}


def glove_train(
    matrix: CooccurrenceMatrix,
    dim: int = 50,
    epochs: int = 50,
    learning_rate: float = 0.05,
    x_max: float = 100.0,
    alpha: float = 0.75,
    seed: int = 0,
) -> tuple[GloveParams, list[float]]:
    """Adagrad minimization of glove_cost; returns params and per-epoch costs
    (index 0 is the initial cost). Aborts on divergence."""
    cells = [(i, j, x) for i, j, x in matrix.nonzero() if x > 0]
    if not cells:
        raise DataError("glove_train: co-occurrence matrix has no positive cells")
    if dim < 1:
        raise DataError(f"glove_train: dim must be >= 1, got {dim}")
    size = len(matrix.vocabulary)
    rng = np.random.default_rng(seed)
    scale = 0.5 / dim
    params = GloveParams(
        word_vectors=rng.uniform(-scale, scale, size=(size, dim)),
        context_vectors=rng.uniform(-scale, scale, size=(size, dim)),
        word_bias=rng.uniform(-scale, scale, size=size),
        context_bias=rng.uniform(-scale, scale, size=size),
        x_max=x_max,
        alpha=alpha,
        learning_rate=learning_rate,
        epochs=epochs,
        seed=seed,
    )
    acc_w = np.full((size, dim), 1e-8)
    acc_c = np.full((size, dim), 1e-8)
    acc_bw = np.full(size, 1e-8)
    acc_bc = np.full(size, 1e-8)
    costs = [glove_cost(matrix, params)]
    order = np.arange(len(cells))
    for _ in range(epochs):
        rng.shuffle(order)
        for k in order:
            i, j, x = cells[k]
            residual = (
                float(params.word_vectors[i] @ params.context_vectors[j])
                + params.word_bias[i]
                + params.context_bias[j]
                - np.log(x)
            )
            coef = 2.0 * _weight(x, x_max, alpha) * residual
            g_w = coef * params.context_vectors[j]
            g_c = coef * params.word_vectors[i]
            acc_w[i] += g_w * g_w
            acc_c[j] += g_c * g_c
            acc_bw[i] += coef * coef
            acc_bc[j] += coef * coef
            params.word_vectors[i] -= learning_rate * g_w / np.sqrt(acc_w[i])
            params.context_vectors[j] -= learning_rate * g_c / np.sqrt(acc_c[j])
            params.word_bias[i] -= learning_rate * coef / np.sqrt(acc_bw[i])
            params.context_bias[j] -= learning_rate * coef / np.sqrt(acc_bc[j])
        cost = glove_cost(matrix, params)
        if not np.isfinite(cost):
            raise DataError(
                f"glove_train diverged: cost {cost} after {len(costs)} epochs "
                f"(lr={learning_rate}, dim={dim}); lower the learning rate"
            )
        costs.append(cost)
    return params, costs
