"""Trilingual labeled tweet corpus: loading, validation, statistics, splitting.

CSV schema is ``id,text,language,label`` (UTF-8, standard quoting). The label
column may be empty for unlabeled rows. Vocabulary statistics are computed on
raw whitespace tokens, before any preprocessing.
"""

from __future__ import annotations

import csv
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import DataError

CSV_HEADER = ["id", "text", "language", "label"]


class Language(Enum):
    ENGLISH = "English"
    URDU = "Urdu"
    SPANISH = "Spanish"

    @classmethod
    def parse(cls, value: str) -> "Language":
        for lang in cls:
            if lang.value.lower() == value.strip().lower():
                return lang
        raise DataError(f"unknown language {value!r} (expected English, Urdu or Spanish)")


class Label(Enum):
    HATEFUL = "Hateful"
    NOT_HATEFUL = "Not-Hateful"

    @classmethod
    def parse(cls, value: str) -> "Label":
        norm = value.strip().lower()
        if norm == "hateful":
            return cls.HATEFUL
        if norm in ("not-hateful", "not hateful", "nothateful"):
            return cls.NOT_HATEFUL
        raise DataError(f"unknown label {value!r} (expected 'Hateful' or 'Not-Hateful')")


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    language: Language
    label: Optional[Label] = None

    def __post_init__(self):
        if not self.text.strip():
            raise DataError(f"tweet {self.id!r}: text is empty after whitespace trim")


@dataclass
class Corpus:
    tweets: list[Tweet] = field(default_factory=list)
    provenance: str = ""

    def __post_init__(self):
        seen: set[str] = set()
        for tweet in self.tweets:
            if tweet.id in seen:
                raise DataError(f"duplicate tweet id {tweet.id!r} in corpus ({self.provenance or 'unnamed'})")
            seen.add(tweet.id)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    def ids(self) -> list[str]:
        return [t.id for t in self.tweets]

    def label_counts(self) -> Counter:
        return Counter(t.label for t in self.tweets if t.label is not None)


@dataclass
class LanguageStats:
    tweet_count: int = 0
    label_counts: dict[str, int] = field(default_factory=dict)
    char_count: int = 0
    vocabulary_size: int = 0
    avg_words_per_tweet: float = 0.0


@dataclass
class CorpusStats:
    total_tweets: int
    total_chars: int
    vocabulary_size: int
    avg_words_per_tweet: float
    per_language: dict[str, LanguageStats]

    def to_dict(self) -> dict:
        return {
            "total_tweets": self.total_tweets,
            "total_chars": self.total_chars,
            "vocabulary_size": self.vocabulary_size,
            "avg_words_per_tweet": self.avg_words_per_tweet,
            "per_language": {
                name: {
                    "tweet_count": s.tweet_count,
                    "label_counts": s.label_counts,
                    "char_count": s.char_count,
                    "vocabulary_size": s.vocabulary_size,
                    "avg_words_per_tweet": s.avg_words_per_tweet,
                }
                for name, s in sorted(self.per_language.items())
            },
        }

    def format_table(self) -> str:
        """Aligned-column text table of the per-language statistics."""
        header = f"{'language':<10} {'tweets':>7} {'hateful':>8} {'not-hateful':>12} {'chars':>9} {'vocab':>7} {'avg words':>10}"
        lines = [header, "-" * len(header)]
        for name, s in sorted(self.per_language.items()):
            lines.append(
                f"{name:<10} {s.tweet_count:>7} {s.label_counts.get('Hateful', 0):>8} "
                f"{s.label_counts.get('Not-Hateful', 0):>12} {s.char_count:>9} "
                f"{s.vocabulary_size:>7} {s.avg_words_per_tweet:>10.2f}"
            )
        lines.append("-" * len(header))
        lines.append(
            f"{'total':<10} {self.total_tweets:>7} {'':>8} {'':>12} {self.total_chars:>9} "
            f"{self.vocabulary_size:>7} {self.avg_words_per_tweet:>10.2f}"
        )
        return "\n".join(lines)


def load_corpus(path: str | Path, expected_language: Optional[Language] = None) -> Corpus:
    """Load a corpus CSV, validating schema, labels, languages and id uniqueness.

    Every error names the offending row (1-based, header excluded).
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    tweets: list[Tweet] = []
    seen_ids: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty, expected header {','.join(CSV_HEADER)}")
        if [h.strip() for h in header] != CSV_HEADER:
            raise DataError(f"{path}: bad header {header!r}, expected {CSV_HEADER}")
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(CSV_HEADER):
                raise DataError(f"{path} row {row_num}: expected {len(CSV_HEADER)} columns, got {len(row)}")
            tweet_id, text, language_str, label_str = (cell.strip() for cell in row)
            try:
                language = Language.parse(language_str)
                label = Label.parse(label_str) if label_str else None
                tweet = Tweet(id=tweet_id, text=text, language=language, label=label)
            except DataError as exc:
                raise DataError(f"{path} row {row_num}: {exc}") from exc
            if expected_language is not None and language is not expected_language:
                raise DataError(
                    f"{path} row {row_num}: language {language.value} does not match expected {expected_language.value}"
                )
            if tweet_id in seen_ids:
                raise DataError(f"{path} row {row_num}: duplicate tweet id {tweet_id!r}")
            seen_ids.add(tweet_id)
            tweets.append(tweet)
    return Corpus(tweets=tweets, provenance=str(path))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for t in corpus.tweets:
            writer.writerow([t.id, t.text, t.language.value, t.label.value if t.label else ""])


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Deterministic corpus statistics on raw (pre-preprocessing) text."""
    per_language: dict[str, LanguageStats] = {}
    vocab_by_lang: dict[str, set[str]] = {}
    words_by_lang: dict[str, int] = {}
    global_vocab: set[str] = set()
    total_chars = 0
    total_words = 0
    for tweet in corpus:
        name = tweet.language.value
        stats = per_language.setdefault(name, LanguageStats())
        vocab = vocab_by_lang.setdefault(name, set())
        tokens = tweet.text.split()
        stats.tweet_count += 1
        stats.char_count += len(tweet.text)
        if tweet.label is not None:
            stats.label_counts[tweet.label.value] = stats.label_counts.get(tweet.label.value, 0) + 1
        vocab.update(tokens)
        global_vocab.update(tokens)
        words_by_lang[name] = words_by_lang.get(name, 0) + len(tokens)
        total_chars += len(tweet.text)
        total_words += len(tokens)
    for name, stats in per_language.items():
        stats.vocabulary_size = len(vocab_by_lang[name])
        stats.avg_words_per_tweet = round(words_by_lang[name] / stats.tweet_count, 2) if stats.tweet_count else 0.0
    return CorpusStats(
        total_tweets=len(corpus),
        total_chars=total_chars,
        vocabulary_size=len(global_vocab),
        avg_words_per_tweet=round(total_words / len(corpus), 2) if len(corpus) else 0.0,
        per_language=per_language,
    )


def stratified_split(corpus: Corpus, test_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Split into train/test preserving (language, label) strata.

    Each stratum contributes its largest-remainder share of the global target
    ``round(N * test_fraction)`` (Python round-half-even), so per-stratum test
    proportions stay within one tweet of ``test_fraction`` while the global
    test size is exact. Deterministic for a given seed.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    strata: dict[tuple[Language, Label], list[Tweet]] = {}
    for tweet in corpus:
        if tweet.label is None:
            raise DataError(f"tweet {tweet.id!r} is unlabeled; stratified_split requires labels")
        strata.setdefault((tweet.language, tweet.label), []).append(tweet)

    global_target = round(len(corpus) * test_fraction)
    keys = sorted(strata, key=lambda k: (k[0].value, k[1].value))
    quotas = {k: len(strata[k]) * test_fraction for k in keys}
    counts = {k: math.floor(quotas[k]) for k in keys}
    remainder = global_target - sum(counts.values())
    # Distribute leftover seats to the largest fractional remainders.
    by_remainder = sorted(keys, key=lambda k: (-(quotas[k] - counts[k]), k[0].value, k[1].value))
    for k in by_remainder:
        if remainder <= 0:
            break
        if counts[k] < len(strata[k]):
            counts[k] += 1
            remainder -= 1

    rng = random.Random(seed)
    test_ids: set[str] = set()
    for k in keys:
        members = list(strata[k])
        rng.shuffle(members)
        test_ids.update(t.id for t in members[: counts[k]])

    train = [t for t in corpus if t.id not in test_ids]
    test = [t for t in corpus if t.id in test_ids]
    origin = corpus.provenance or "corpus"
    return (
        Corpus(tweets=train, provenance=f"{origin} [train]"),
        Corpus(tweets=test, provenance=f"{origin} [test]"),
    )
