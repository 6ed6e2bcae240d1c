"""Confusion matrices, macro-averaged metrics, and baseline improvements.

Hateful is the positive class. Per-class precision/recall with an empty
denominator are defined as 0 and flagged in the report. Abstains are
excluded from the matrix and counted separately. Metrics are displayed to
two decimals; comparisons in tests always use numeric tolerances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .corpus import Label
from .errors import DataError
from .predictions import Prediction


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int
    fp: int
    fn: int
    tp: int

    def __post_init__(self):
        if min(self.tn, self.fp, self.fn, self.tp) < 0:
            raise DataError("confusion matrix counts must be non-negative")
        if self.total < 1:
            raise DataError("confusion matrix must contain at least one example")

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False  # an empty denominator was defined as 0


@dataclass
class MetricsReport:
    hateful: ClassMetrics
    not_hateful: ClassMetrics
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    abstain_count: int = 0

    def to_dict(self) -> dict:
        return {
            "per_class": {
                "Hateful": vars(self.hateful),
                "Not-Hateful": vars(self.not_hateful),
            },
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "abstain_count": self.abstain_count,
        }


def confusion(
    predictions: Sequence[Prediction],
    gold: dict[str, Label],
) -> tuple[ConfusionMatrix, int]:
    """Tally predictions against gold labels; returns (matrix, abstains)."""
    tn = fp = fn = tp = 0
    abstains = 0
    for prediction in predictions:
        if prediction.tweet_id not in gold:
            raise DataError(f"prediction for {prediction.tweet_id!r} has no gold label")
        if prediction.abstained:
            abstains += 1
            continue
        actual = gold[prediction.tweet_id]
        predicted = prediction.label
        if actual is Label.HATEFUL:
            if predicted is Label.HATEFUL:
                tp += 1
            else:
                fn += 1
        else:
            if predicted is Label.HATEFUL:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tn=tn, fp=fp, fn=fn, tp=tp), abstains


def _rate(numerator: int, denominator: int) -> tuple[float, bool]:
    if denominator == 0:
        return 0.0, True
    return numerator / denominator, False


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def macro_metrics(cm: ConfusionMatrix, abstain_count: int = 0) -> MetricsReport:
    """Unweighted two-class macro averages plus accuracy."""
    p_hate, d1 = _rate(cm.tp, cm.tp + cm.fp)
    r_hate, d2 = _rate(cm.tp, cm.tp + cm.fn)
    p_not, d3 = _rate(cm.tn, cm.tn + cm.fn)
    r_not, d4 = _rate(cm.tn, cm.tn + cm.fp)
    hateful = ClassMetrics(p_hate, r_hate, _f1(p_hate, r_hate), degenerate=d1 or d2)
    not_hateful = ClassMetrics(p_not, r_not, _f1(p_not, r_not), degenerate=d3 or d4)
    return MetricsReport(
        hateful=hateful,
        not_hateful=not_hateful,
        macro_precision=(hateful.precision + not_hateful.precision) / 2.0,
        macro_recall=(hateful.recall + not_hateful.recall) / 2.0,
        macro_f1=(hateful.f1 + not_hateful.f1) / 2.0,
        accuracy=(cm.tn + cm.tp) / cm.total,
        abstain_count=abstain_count,
    )


def improvement(model_f1: float, baseline_f1: float) -> float:
    """Percent gain over the baseline, reported to 2 decimals."""
    if baseline_f1 <= 0.0:
        raise DataError(f"baseline F1 must be positive, got {baseline_f1}")
    return round((model_f1 - baseline_f1) / baseline_f1 * 100.0, 2)


@dataclass
class RunRecord:
    name: str
    cm: ConfusionMatrix
    baseline_f1: Optional[float] = None
    abstain_count: int = 0


@dataclass
class Report:
    runs: list[RunRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        sections: dict = {"metrics": {}, "confusion": {}, "improvement": {}}
        for run in sorted(self.runs, key=lambda r: r.name):
            metrics = macro_metrics(run.cm, run.abstain_count)
            sections["metrics"][run.name] = metrics.to_dict()
            sections["confusion"][run.name] = {
                "tn": run.cm.tn, "fp": run.cm.fp, "fn": run.cm.fn, "tp": run.cm.tp,
            }
            if run.baseline_f1 is not None:
                # Improvement is computed from the displayed 2-decimal scores
                # so the emitted row is internally consistent.
                model_f1 = round(metrics.macro_f1, 2)
                sections["improvement"][run.name] = {
                    "model_f1": model_f1,
                    "baseline_f1": run.baseline_f1,
                    "improvement_percent": improvement(model_f1, run.baseline_f1),
                }
        return sections

    def format_text(self) -> str:
        lines = []
        header = f"{'dataset':<16} {'precision':>9} {'recall':>9} {'f1':>9} {'accuracy':>9} {'abstain':>8}"
        lines.append(header)
        lines.append("-" * len(header))
        ordered = sorted(self.runs, key=lambda r: r.name)
        for run in ordered:
            m = macro_metrics(run.cm, run.abstain_count)
            lines.append(
                f"{run.name:<16} {m.macro_precision:>9.2f} {m.macro_recall:>9.2f} "
                f"{m.macro_f1:>9.2f} {m.accuracy:>9.2f} {m.abstain_count:>8}"
            )
        lines.append("")
        for run in ordered:
            lines.append(f"confusion [{run.name}] (rows: actual Not-Hateful / Hateful)")
            lines.append(f"  {'':<18} {'pred Not-Hateful':>18} {'pred Hateful':>14}")
            lines.append(f"  {'actual Not-Hateful':<18} {run.cm.tn:>18} {run.cm.fp:>14}")
            lines.append(f"  {'actual Hateful':<18} {run.cm.fn:>18} {run.cm.tp:>14}")
        improvements = [r for r in ordered if r.baseline_f1 is not None]
        if improvements:
            lines.append("")
            header = f"{'dataset':<16} {'model f1':>9} {'baseline':>9} {'improvement %':>14}"
            lines.append(header)
            lines.append("-" * len(header))
            for run in improvements:
                m = macro_metrics(run.cm, run.abstain_count)
                model_f1 = round(m.macro_f1, 2)
                lines.append(
                    f"{run.name:<16} {model_f1:>9.2f} {run.baseline_f1:>9.2f} "
                    f"{improvement(model_f1, run.baseline_f1):>14.2f}"
                )
        return "\n".join(lines) + "\n"

    def format_markdown(self) -> str:
        lines = ["| dataset | precision | recall | f1 | accuracy | abstain |", "|---|---|---|---|---|---|"]
        ordered = sorted(self.runs, key=lambda r: r.name)
        for run in ordered:
            m = macro_metrics(run.cm, run.abstain_count)
            lines.append(
                f"| {run.name} | {m.macro_precision:.2f} | {m.macro_recall:.2f} "
                f"| {m.macro_f1:.2f} | {m.accuracy:.2f} | {m.abstain_count} |"
            )
        lines.append("")
        for run in ordered:
            lines.append(f"**Confusion — {run.name}** (positive class: Hateful)")
            lines.append("")
            lines.append("| actual \\ predicted | Not-Hateful | Hateful |")
            lines.append("|---|---|---|")
            lines.append(f"| Not-Hateful | {run.cm.tn} | {run.cm.fp} |")
            lines.append(f"| Hateful | {run.cm.fn} | {run.cm.tp} |")
            lines.append("")
        improvements = [r for r in ordered if r.baseline_f1 is not None]
        if improvements:
            lines.append("| dataset | model f1 | baseline f1 | improvement % |")
            lines.append("|---|---|---|---|")
            for run in improvements:
                m = macro_metrics(run.cm, run.abstain_count)
                model_f1 = round(m.macro_f1, 2)
                lines.append(
                    f"| {run.name} | {model_f1:.2f} | {run.baseline_f1:.2f} "
                    f"| {improvement(model_f1, run.baseline_f1):.2f} |"
                )
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str | Path, stem: str = "report", human_format: str = "text") -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        machine = out_dir / f"{stem}.json"
        machine.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if human_format == "markdown":
            human = out_dir / f"{stem}.md"
            human.write_text(self.format_markdown(), encoding="utf-8")
        else:
            human = out_dir / f"{stem}.txt"
            human.write_text(self.format_text(), encoding="utf-8")
        return machine, human
