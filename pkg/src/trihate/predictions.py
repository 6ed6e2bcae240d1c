"""Prediction records and their CSV persistence.

File format: ``tweet_id,classifier_id,label,score``; abstains are stored
with an empty label so they survive round-trips without polluting metrics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .corpus import Label
from .errors import DataError


@dataclass(frozen=True)
class Prediction:
    tweet_id: str
    label: Optional[Label]  # None records an abstain
    classifier_id: str
    score: Optional[float] = None

    @property
    def abstained(self) -> bool:
        return self.label is None


def save_predictions(predictions: Sequence[Prediction], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tweet_id", "classifier_id", "label", "score"])
        for p in predictions:
            writer.writerow([
                p.tweet_id,
                p.classifier_id,
                p.label.value if p.label else "",
                "" if p.score is None else f"{p.score:.10g}",
            ])


def load_predictions(path: str | Path) -> list[Prediction]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"prediction file not found: {path}")
    out: list[Prediction] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["tweet_id", "classifier_id", "label", "score"]:
            raise DataError(f"{path}: bad prediction header {header!r}")
        for row_num, row in enumerate(reader, start=1):
            if len(row) != 4:
                raise DataError(f"{path} row {row_num}: expected 4 columns")
            tweet_id, classifier_id, label_str, score_str = row
            label = Label.parse(label_str) if label_str else None
            score = float(score_str) if score_str else None
            out.append(Prediction(tweet_id=tweet_id, label=label, classifier_id=classifier_id, score=score))
    return out
