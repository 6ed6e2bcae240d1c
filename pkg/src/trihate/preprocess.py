"""Four-stage text cleaning: strip noise, lowercase, filter tokens, stem.

Stage D1 removes URLs, emoji, punctuation, symbols and digits ('#' is
stripped but the hashtag word survives). D2 lowercases (identity for
caseless scripts). D3 drops per-language stopwords and tokens shorter than
three characters. D4 applies per-language suffix-stripping rules to a
fixpoint, so stemming is idempotent by construction.
"""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .corpus import Corpus, Label, Language
from .errors import DataError

URL_RE = re.compile(r"(?:https?://|www\.)\S+")

# Pictographs, emoticons, transport, supplemental symbols, dingbats,
# misc symbols/arrows, plus variation selectors, ZWJ and keycap combiner.
EMOJI_RANGES = (
    (0x1F000, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0xFE00, 0xFE0F),
    (0x200D, 0x200D),
    (0x20E3, 0x20E3),
)


class Stage(Enum):
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"


def _is_emoji(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in EMOJI_RANGES)


def _is_stripped(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S") or unicodedata.category(ch) == "Nd"


def clean(text: str) -> str:
    """Stages D1 + D2: remove noise characters and lowercase.

    URLs and emoji are replaced by a space (they separate words);
    punctuation, symbols and digits are deleted in place so intra-word
    marks ("don't", "co-op") merge rather than split. Whitespace collapses
    to single spaces.
    """
    text = URL_RE.sub(" ", text)
    out = []
    for ch in text:
        if _is_emoji(ch):
            out.append(" ")
        elif _is_stripped(ch):
            continue
        else:
            out.append(ch)
    return " ".join("".join(out).lower().split())


def tokenize(text: str) -> list[str]:
    return text.split()


@dataclass
class StopwordTable:
    by_language: dict[Language, frozenset[str]]

    def stopwords(self, language: Language) -> frozenset[str]:
        if language not in self.by_language:
            raise DataError(f"no stopword list for language {language.value}")
        return self.by_language[language]


@dataclass(frozen=True)
class StemRule:
    suffix: str
    replacement: str
    min_stem_len: int


@dataclass
class StemRuleTable:
    by_language: dict[Language, tuple[StemRule, ...]]

    def rules(self, language: Language) -> tuple[StemRule, ...]:
        if language not in self.by_language:
            raise DataError(f"no stem rules for language {language.value}")
        return self.by_language[language]


def load_stopwords(paths: dict[Language, str | Path]) -> StopwordTable:
    """One token per line, UTF-8; '#' lines are comments. Entries lowercased."""
    table: dict[Language, frozenset[str]] = {}
    for language, path in paths.items():
        path = Path(path)
        if not path.exists():
            raise DataError(f"stopword file not found: {path}")
        words = set()
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
        table[language] = frozenset(words)
    return StopwordTable(by_language=table)


def load_stem_rules(paths: dict[Language, str | Path]) -> StemRuleTable:
    """CSV ``suffix,replacement,min_stem_len``; replacements must shorten the word."""
    table: dict[Language, tuple[StemRule, ...]] = {}
    for language, path in paths.items():
        path = Path(path)
        if not path.exists():
            raise DataError(f"stem rule file not found: {path}")
        rules = []
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["suffix", "replacement", "min_stem_len"]:
                raise DataError(f"{path}: bad stem-rule header {header!r}")
            for row_num, row in enumerate(reader, start=1):
                if len(row) != 3:
                    raise DataError(f"{path} row {row_num}: expected 3 columns")
                suffix, replacement, min_len = row[0], row[1], int(row[2])
                if not suffix:
                    raise DataError(f"{path} row {row_num}: empty suffix")
                if len(replacement) > len(suffix) or replacement == suffix:
                    raise DataError(
                        f"{path} row {row_num}: replacement {replacement!r} must be shorter than "
                        f"or equal-length to (and different from) suffix {suffix!r}"
                    )
                rules.append(StemRule(suffix, replacement, min_len))
        # Longest suffix wins when several match.
        rules.sort(key=lambda r: (-len(r.suffix), r.suffix))
        table[language] = tuple(rules)
    return StemRuleTable(by_language=table)


def _data_path(*parts: str) -> Path:
    return Path(resources.files("trihate").joinpath("data", *parts))  # type: ignore[arg-type]


def default_stopwords() -> StopwordTable:
    return load_stopwords(
        {
            Language.ENGLISH: _data_path("stopwords", "english.txt"),
            Language.URDU: _data_path("stopwords", "urdu.txt"),
            Language.SPANISH: _data_path("stopwords", "spanish.txt"),
        }
    )


def default_stem_rules() -> StemRuleTable:
    return load_stem_rules(
        {
            Language.ENGLISH: _data_path("stem_rules", "english.csv"),
            Language.URDU: _data_path("stem_rules", "urdu.csv"),
            Language.SPANISH: _data_path("stem_rules", "spanish.csv"),
        }
    )


def remove_stopwords(
    tokens: Sequence[str],
    language: Language,
    table: StopwordTable,
    min_token_len: int = 3,
) -> list[str]:
    """Stage D3: drop stopwords and tokens under ``min_token_len`` scalars.

    Set ``min_token_len=0`` to disable the length filter for a language.
    """
    stopwords = table.stopwords(language)
    return [t for t in tokens if t not in stopwords and len(t) >= min_token_len]


def _stem_word(word: str, rules: Sequence[StemRule]) -> str:
    # Iterate to a fixpoint. Word length never grows, so the state space is
    # finite; if equal-length rules ever cycle, the lexicographically
    # smallest member is the canonical stem (keeps stemming idempotent).
    visited: list[str] = []
    seen: set[str] = set()
    while True:
        if word in seen:
            cycle = visited[visited.index(word):]
            return min(cycle)
        visited.append(word)
        seen.add(word)
        for rule in rules:
            if word.endswith(rule.suffix) and len(word) - len(rule.suffix) >= rule.min_stem_len:
                word = word[: len(word) - len(rule.suffix)] + rule.replacement
                break
        else:
            return word


def stem(tokens: Sequence[str], language: Language, table: Optional[StemRuleTable] = None) -> list[str]:
    """Stage D4: deterministic suffix stripping; idempotent."""
    if table is None:
        table = default_stem_rules()
    rules = table.rules(language)
    return [_stem_word(t, rules) for t in tokens]


@dataclass
class ProcessedTweet:
    tweet_id: str
    tokens: tuple[str, ...]
    text: str
    language: Language
    label: Optional[Label]
    stage: Stage = Stage.D4


@dataclass
class PreprocessReport:
    input_token_count: int = 0
    after_stopword_count: int = 0
    after_stem_count: int = 0
    emptied_tweet_ids: list[str] = field(default_factory=list)


@dataclass
class ProcessedCorpus:
    tweets: list[ProcessedTweet]
    report: PreprocessReport
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)


def preprocess_tweet(
    text: str,
    language: Language,
    stopwords: StopwordTable,
    stem_rules: StemRuleTable,
    min_token_len: int = 3,
) -> list[str]:
    cleaned = clean(text)
    tokens = tokenize(cleaned)
    tokens = remove_stopwords(tokens, language, stopwords, min_token_len=min_token_len)
    return stem(tokens, language, stem_rules)


def preprocess_corpus(
    corpus: Corpus,
    stopwords: Optional[StopwordTable] = None,
    stem_rules: Optional[StemRuleTable] = None,
    min_token_len: int = 3,
    length_filter_disabled: frozenset[Language] = frozenset(),
) -> ProcessedCorpus:
    """Apply D1 through D4 to every tweet; empty results are kept and flagged."""
    if stopwords is None:
        stopwords = default_stopwords()
    if stem_rules is None:
        stem_rules = default_stem_rules()
    report = PreprocessReport()
    processed: list[ProcessedTweet] = []
    for tweet in corpus:
        min_len = 0 if tweet.language in length_filter_disabled else min_token_len
        tokens_d2 = tokenize(clean(tweet.text))
        tokens_d3 = remove_stopwords(tokens_d2, tweet.language, stopwords, min_token_len=min_len)
        tokens_d4 = stem(tokens_d3, tweet.language, stem_rules)
        report.input_token_count += len(tokens_d2)
        report.after_stopword_count += len(tokens_d3)
        report.after_stem_count += len(tokens_d4)
        if not tokens_d4:
            report.emptied_tweet_ids.append(tweet.id)
        processed.append(
            ProcessedTweet(
                tweet_id=tweet.id,
                tokens=tuple(tokens_d4),
                text=" ".join(tokens_d4),
                language=tweet.language,
                label=tweet.label,
            )
        )
    return ProcessedCorpus(tweets=processed, report=report, provenance=corpus.provenance)


def save_processed(corpus: ProcessedCorpus, path: str | Path) -> None:
    """JSON-lines, one tweet per line (empty token lists survive round-trip)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for tweet in corpus:
            fh.write(
                json.dumps(
                    {
                        "id": tweet.tweet_id,
                        "tokens": list(tweet.tokens),
                        "language": tweet.language.value,
                        "label": tweet.label.value if tweet.label else None,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_processed(path: str | Path) -> ProcessedCorpus:
    path = Path(path)
    if not path.exists():
        raise DataError(f"processed corpus not found: {path}")
    tweets = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            tokens = tuple(obj["tokens"])
            tweets.append(
                ProcessedTweet(
                    tweet_id=obj["id"],
                    tokens=tokens,
                    text=" ".join(tokens),
                    language=Language.parse(obj["language"]),
                    label=Label.parse(obj["label"]) if obj.get("label") else None,
                )
            )
    return ProcessedCorpus(tweets=tweets, report=PreprocessReport(), provenance=str(path))
