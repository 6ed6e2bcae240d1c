"""Inter-annotator agreement: majority voting and Fleiss' Kappa.

Kappa bands use lower-inclusive half-open intervals so every value in
[-1, 1] maps to exactly one interpretation.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from ..corpus import Label
from ..errors import DataError

CATEGORIES = (Label.HATEFUL, Label.NOT_HATEFUL)


@dataclass(frozen=True)
class AnnotationRecord:
    tweet_id: str
    annotator_id: str
    label: Label
    timestamp: float = 0.0


@dataclass
class VotingOutcome:
    tweet_id: str
    resolved: Optional[Label]
    tie: bool
    vote_counts: dict[Label, int]


@dataclass
class AssignmentMatrix:
    """Items x categories count matrix; every row sums to n annotators."""

    rows: list[list[int]]
    item_ids: list[str]
    n: int
    categories: tuple[Label, ...] = CATEGORIES

    def __post_init__(self):
        if self.n < 2:
            raise DataError(f"need at least 2 annotators per item, got {self.n}")
        for item_id, row in zip(self.item_ids, self.rows):
            if len(row) != len(self.categories):
                raise DataError(f"item {item_id!r}: row has {len(row)} cells, expected {len(self.categories)}")
            if any(cell < 0 for cell in row):
                raise DataError(f"item {item_id!r}: negative count")
            if sum(row) != self.n:
                raise DataError(f"item {item_id!r}: row sums to {sum(row)}, expected n={self.n}")


class KappaBand(Enum):
    PERFECT = "Perfect Agreement"
    SUBSTANTIAL = "Substantial Agreement"
    MODERATE = "Moderate Agreement"
    FAIR = "Fair Agreement"
    POOR = "Poor Agreement"


@dataclass
class AgreementReport:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    interpretation: KappaBand
    item_count: int
    annotator_count: int

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "interpretation": self.interpretation.value,
            "item_count": self.item_count,
            "annotator_count": self.annotator_count,
        }


def live_records(records: Sequence[AnnotationRecord]) -> list[AnnotationRecord]:
    """Reduce repeated submissions to the last write per (tweet, annotator).

    Later timestamps supersede earlier ones; equal timestamps keep the record
    seen last, matching append-order replay of the store file.
    """
    latest: dict[tuple[str, str], AnnotationRecord] = {}
    for rec in records:
        key = (rec.tweet_id, rec.annotator_id)
        if key not in latest or rec.timestamp >= latest[key].timestamp:
            latest[key] = rec
    return list(latest.values())


def majority_vote(records: Sequence[AnnotationRecord]) -> VotingOutcome:
    """Resolve one tweet's records by strict majority; even splits flag a tie."""
    if not records:
        raise DataError("majority_vote: no records")
    tweet_ids = {r.tweet_id for r in records}
    if len(tweet_ids) != 1:
        raise DataError(f"majority_vote: records span multiple tweets {sorted(tweet_ids)}")
    live = live_records(records)
    if len(live) < 2:
        raise DataError(f"majority_vote: tweet {records[0].tweet_id!r} has fewer than 2 distinct annotators")
    counts = Counter(r.label for r in live)
    vote_counts = {label: counts.get(label, 0) for label in CATEGORIES}
    best = max(vote_counts.values())
    winners = [label for label, c in vote_counts.items() if c == best]
    if len(winners) == 1:
        return VotingOutcome(records[0].tweet_id, resolved=winners[0], tie=False, vote_counts=vote_counts)
    return VotingOutcome(records[0].tweet_id, resolved=None, tie=True, vote_counts=vote_counts)


def build_assignment_matrix(
    records: Sequence[AnnotationRecord], n: int
) -> tuple[AssignmentMatrix, list[str]]:
    """Group live records by tweet into category counts.

    Tweets with a record count other than ``n`` are excluded and returned
    in the second element for reporting.
    """
    by_tweet: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for rec in live_records(records):
        by_tweet[rec.tweet_id].append(rec)
    rows: list[list[int]] = []
    item_ids: list[str] = []
    excluded: list[str] = []
    for tweet_id in sorted(by_tweet):
        recs = by_tweet[tweet_id]
        if len(recs) != n:
            excluded.append(tweet_id)
            continue
        counts = Counter(r.label for r in recs)
        rows.append([counts.get(label, 0) for label in CATEGORIES])
        item_ids.append(tweet_id)
    if not rows:
        raise DataError("build_assignment_matrix: no tweet has the required number of records")
    return AssignmentMatrix(rows=rows, item_ids=item_ids, n=n), excluded


def fleiss_kappa(matrix: AssignmentMatrix) -> AgreementReport:
    """Fleiss' Kappa for a fixed number of raters per item.

    Per-item agreement P_i = (sum_j n_ij^2 - n) / (n (n - 1)); the observed
    agreement is the mean P_i, the expected agreement is sum_j p_j^2 over
    the category marginals, and kappa = (P - Pe) / (1 - Pe).
    """
    if not matrix.rows:
        raise DataError("fleiss_kappa: empty matrix")
    n = matrix.n
    num_items = len(matrix.rows)
    p_items = [(sum(c * c for c in row) - n) / (n * (n - 1)) for row in matrix.rows]
    p_bar = sum(p_items) / num_items
    totals = [sum(row[j] for row in matrix.rows) for j in range(len(matrix.categories))]
    grand = num_items * n
    p_cat = [t / grand for t in totals]
    p_exp = sum(p * p for p in p_cat)
    if p_exp >= 1.0:
        # All mass in one category: kappa is 1 only for perfect agreement.
        if p_bar == 1.0:
            kappa = 1.0
        else:
            raise DataError("fleiss_kappa: degenerate marginal (all annotations in one category)")
    else:
        kappa = (p_bar - p_exp) / (1.0 - p_exp)
    return AgreementReport(
        kappa=kappa,
        observed_agreement=p_bar,
        expected_agreement=p_exp,
        interpretation=interpret_kappa(max(-1.0, min(1.0, kappa))),
        item_count=num_items,
        annotator_count=n,
    )


def interpret_kappa(kappa: float) -> KappaBand:
    if not -1.0 <= kappa <= 1.0:
        raise DataError(f"kappa out of range [-1, 1]: {kappa}")
    if kappa == 1.0:
        return KappaBand.PERFECT
    if kappa >= 0.80:
        return KappaBand.SUBSTANTIAL
    if kappa >= 0.60:
        return KappaBand.MODERATE
    if kappa >= 0.40:
        return KappaBand.FAIR
    return KappaBand.POOR


@dataclass
class AgreementResult:
    report: AgreementReport
    outcomes: list[VotingOutcome]
    excluded_tweets: list[str] = field(default_factory=list)


def agreement_pipeline(records: Sequence[AnnotationRecord], n: int) -> AgreementResult:
    """Majority-vote every tweet and compute the pooled Fleiss' Kappa."""
    if not records:
        raise DataError("agreement_pipeline: empty record set")
    matrix, excluded = build_assignment_matrix(records, n)
    report = fleiss_kappa(matrix)
    by_tweet: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for rec in live_records(records):
        by_tweet[rec.tweet_id].append(rec)
    outcomes = [majority_vote(by_tweet[tweet_id]) for tweet_id in matrix.item_ids]
    return AgreementResult(report=report, outcomes=outcomes, excluded_tweets=excluded)
