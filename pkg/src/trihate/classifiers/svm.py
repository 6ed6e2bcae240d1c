"""Linear SVM trained by full-batch subgradient descent on hinge loss.

Objective: 0.5 ||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)). A step that
would raise the objective is rejected and the learning rate halved, so the
recorded per-epoch trace is non-increasing by construction. Hateful is the
positive class (+1); a score of exactly zero predicts Not-Hateful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..corpus import Label
from ..errors import DataError
from ..features.tfidf import FeatureMatrix
from ..predictions import Prediction


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    C: float
    seed: int
    objective_trace: list[float] = field(default_factory=list)
    classifier_id: str = "svm"


def _as_matrix(features) -> sparse.csr_matrix:
    if isinstance(features, FeatureMatrix):
        return features.matrix
    if sparse.issparse(features):
        return features.tocsr()
    return sparse.csr_matrix(np.asarray(features, dtype=np.float64))


def _labels_to_signs(labels) -> np.ndarray:
    signs = np.array([1.0 if lab is Label.HATEFUL else -1.0 for lab in labels])
    return signs


def svm_objective(X: sparse.csr_matrix, y: np.ndarray, w: np.ndarray, b: float, C: float) -> float:
    margins = 1.0 - y * (X @ w + b)
    return 0.5 * float(w @ w) + C * float(np.maximum(margins, 0.0).sum())


def svm_train(
    features,
    labels,
    C: float = 1.0,
    epochs: int = 200,
    seed: int = 0,
    learning_rate: float = 0.1,
) -> LinearModel:
    X = _as_matrix(features)
    if X.shape[0] != len(labels):
        raise DataError(f"svm_train: {X.shape[0]} feature rows but {len(labels)} labels")
    y = _labels_to_signs(labels)
    if len(set(y.tolist())) < 2:
        raise DataError("svm_train: need at least one example of each class")

    w = np.zeros(X.shape[1])
    b = 0.0
    lr = learning_rate
    trace = [svm_objective(X, y, w, b, C)]
    for _ in range(epochs):
        margins = 1.0 - y * (X @ w + b)
        active = margins > 0.0
        grad_w = w - C * (X[active].T @ y[active]) if active.any() else w.copy()
        grad_w = np.asarray(grad_w).ravel()
        grad_b = -C * float(y[active].sum()) if active.any() else 0.0
        new_w = w - lr * grad_w
        new_b = b - lr * grad_b
        objective = svm_objective(X, y, new_w, new_b, C)
        if objective <= trace[-1]:
            w, b = new_w, new_b
            trace.append(objective)
        else:
            # Reject the step; retry the epoch at half the rate.
            lr *= 0.5
            trace.append(trace[-1])
    if not np.all(np.isfinite(w)):
        raise DataError("svm_train: non-finite weights")
    return LinearModel(weights=w, bias=b, C=C, seed=seed, objective_trace=trace)


def svm_predict(model: LinearModel, features, row_ids=None) -> list[Prediction]:
    X = _as_matrix(features)
    if X.shape[1] != model.weights.shape[0]:
        raise DataError(
            f"svm_predict: feature dimension {X.shape[1]} does not match model dimension {model.weights.shape[0]}"
        )
    if row_ids is None:
        if isinstance(features, FeatureMatrix):
            row_ids = features.row_ids
        else:
            row_ids = [str(i) for i in range(X.shape[0])]
    scores = np.asarray(X @ model.weights).ravel() + model.bias
    return [
        Prediction(
            tweet_id=row_ids[i],
            label=Label.HATEFUL if scores[i] > 0 else Label.NOT_HATEFUL,
            classifier_id=model.classifier_id,
            score=float(scores[i]),
        )
        for i in range(X.shape[0])
    ]
