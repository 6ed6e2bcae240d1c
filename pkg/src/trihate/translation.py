"""Cross-lingual corpus standardization through a pluggable translator.

Two providers ship: a deterministic phrase-table mock for tests and CI, and
a generic HTTP client for a live translation API (key via environment
variable, retry with exponential backoff, configurable rate limit).
Glossary overrides run after provider output because public translators
soften slur intensity; the glossary restores the required rendering.
"""

from __future__ import annotations

import csv
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol, Sequence

import httpx

from .corpus import Corpus, Language, Tweet
from .errors import DataError, ProviderError

LANG_CODES = {Language.ENGLISH: "en", Language.URDU: "ur", Language.SPANISH: "es"}


def pre_tokenize(text: str) -> list[str]:
    """Whitespace segmentation; URLs and @mentions contain no whitespace so
    they stay atomic. Segments rejoin with single spaces to the
    whitespace-normalized input."""
    return text.split()


class TranslationProvider(Protocol):
    provider_id: str

    def translate(self, text: str, source: Language, target: Language) -> str: ...


@dataclass(frozen=True)
class GlossaryEntry:
    language: Language
    term: str
    required_rendering: str
    note: str = ""
    target_language: Optional[Language] = None  # None applies to every target


@dataclass
class Glossary:
    entries: list[GlossaryEntry] = field(default_factory=list)

    def applicable(self, source: Language, target: Language) -> list[GlossaryEntry]:
        # Longest term first so multi-word slurs win over embedded words.
        return sorted(
            (
                e
                for e in self.entries
                if e.language is source and (e.target_language is None or e.target_language is target)
            ),
            key=lambda e: (-len(e.term), e.term),
        )


def load_glossary(path: str | Path) -> Glossary:
    """CSV ``lang,term,required_rendering,note``.

    The lang cell tags the term's language; ``Spanish>English`` restricts
    the entry to one translation direction (renderings are usually
    target-language specific).
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"glossary file not found: {path}")
    entries = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["lang", "term", "required_rendering", "note"]:
            raise DataError(f"{path}: bad glossary header {header!r}")
        for row_num, row in enumerate(reader, start=1):
            if len(row) != 4:
                raise DataError(f"{path} row {row_num}: expected 4 columns")
            lang, term, rendering, note = row
            if not term.strip():
                raise DataError(f"{path} row {row_num}: empty term")
            target: Optional[Language] = None
            if ">" in lang:
                source_str, target_str = lang.split(">", 1)
                target = Language.parse(target_str)
            else:
                source_str = lang
            entries.append(
                GlossaryEntry(Language.parse(source_str), term.strip(), rendering.strip(), note, target)
            )
    return Glossary(entries=entries)


class PhraseTableProvider:
    """Deterministic mock: greedy longest-phrase lookup over segments.

    Table rows are ``source_lang,target_lang,source_phrase,target_phrase``;
    lookup is case-insensitive. Segments not covered by the table pass
    through unchanged, so output is never empty for non-empty input.
    """

    provider_id = "mock-phrase-table"

    def __init__(self, table: dict[tuple[Language, Language, str], str]):
        self._table = {(s, t, phrase.lower()): out for (s, t, phrase), out in table.items()}
        self._max_phrase_len = max((len(p.split()) for (_, _, p) in self._table), default=1)

    @classmethod
    def from_csv(cls, path: str | Path) -> "PhraseTableProvider":
        path = Path(path)
        if not path.exists():
            raise DataError(f"phrase table not found: {path}")
        table: dict[tuple[Language, Language, str], str] = {}
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["source_lang", "target_lang", "source_phrase", "target_phrase"]:
                raise DataError(f"{path}: bad phrase table header {header!r}")
            for row_num, row in enumerate(reader, start=1):
                if len(row) != 4:
                    raise DataError(f"{path} row {row_num}: expected 4 columns")
                src, tgt, phrase, out = row
                table[(Language.parse(src), Language.parse(tgt), phrase.strip())] = out.strip()
        return cls(table)

    def translate(self, text: str, source: Language, target: Language) -> str:
        if source is target:
            return text
        segments = pre_tokenize(text)
        out: list[str] = []
        i = 0
        while i < len(segments):
            match = None
            for span in range(min(self._max_phrase_len, len(segments) - i), 0, -1):
                phrase = " ".join(segments[i : i + span]).lower()
                key = (source, target, phrase)
                if key in self._table:
                    match = (span, self._table[key])
                    break
            if match:
                span, rendered = match
                out.append(rendered)
                i += span
            else:
                out.append(segments[i])
                i += 1
        return " ".join(out)


class HttpTranslationProvider:
    """Minimal JSON-over-HTTP client for a hosted translation endpoint.

    Sends ``{"q": text, "source": code, "target": code}`` and expects
    ``{"translatedText": ...}``. Retries transient failures with
    exponential backoff and spaces requests by ``min_interval`` seconds.
    """

    provider_id = "http"

    def __init__(
        self,
        endpoint: str,
        api_key_env: str = "TRANSLATE_API_KEY",
        timeout: float = 30.0,
        max_retries: int = 3,
        backoff_base: float = 0.5,
        min_interval: float = 0.0,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint
        self.api_key = os.environ.get(api_key_env, "")
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.min_interval = min_interval
        self._last_request = 0.0
        self._lock = threading.Lock()
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def _throttle(self) -> None:
        with self._lock:
            wait = self._last_request + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()

    def translate(self, text: str, source: Language, target: Language) -> str:
        if source is target:
            return text
        payload = {"q": text, "source": LANG_CODES[source], "target": LANG_CODES[target]}
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            self._throttle()
            try:
                response = self._client.post(self.endpoint, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code >= 500 or response.status_code == 429:
                last_error = ProviderError(f"translation endpoint returned {response.status_code}", retryable=True)
                continue
            if response.status_code != 200:
                raise ProviderError(f"translation endpoint returned {response.status_code}: {response.text[:200]}")
            translated = response.json().get("translatedText", "")
            if not translated.strip():
                raise ProviderError("translation endpoint returned empty text")
            return translated
        raise ProviderError(f"translation failed after {self.max_retries + 1} attempts: {last_error}", retryable=True)


class TranslationCache:
    """Disk-persisted (text, source, target, provider) -> translation map."""

    def __init__(self, path: Optional[str | Path] = None):
        self._path = Path(path) if path else None
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if self._path and self._path.exists():
            self._entries = json.loads(self._path.read_text(encoding="utf-8"))

    @staticmethod
    def _key(text: str, source: Language, target: Language, provider_id: str) -> str:
        return "\x1f".join([provider_id, LANG_CODES[source], LANG_CODES[target], text])

    def get(self, text: str, source: Language, target: Language, provider_id: str) -> Optional[str]:
        with self._lock:
            return self._entries.get(self._key(text, source, target, provider_id))

    def put(self, text: str, source: Language, target: Language, provider_id: str, translated: str) -> None:
        with self._lock:
            self._entries[self._key(text, source, target, provider_id)] = translated

    def save(self) -> None:
        if self._path:
            with self._lock:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                self._path.write_text(
                    json.dumps(self._entries, ensure_ascii=False, indent=0, sort_keys=True),
                    encoding="utf-8",
                )

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


@dataclass
class TranslatedTweet:
    original: Tweet
    target_language: Language
    translated_text: str
    provider_id: str
    glossary_hits: list[str] = field(default_factory=list)
    validated: bool = True


def _contains(haystack: str, needle: str) -> bool:
    return re.search(re.escape(needle), haystack, flags=re.IGNORECASE) is not None


def translate_tweet(
    tweet: Tweet,
    target: Language,
    provider: TranslationProvider,
    glossary: Optional[Glossary] = None,
    cache: Optional[TranslationCache] = None,
) -> TranslatedTweet:
    """Translate one tweet, then enforce glossary renderings.

    When the source text contains a glossary term but the provider output
    lacks the required rendering, the provider's own rendering of the bare
    term is located in the output and replaced. If it cannot be located the
    pair is left for validate_translations to flag (validated = False).
    """
    if target is tweet.language:
        return TranslatedTweet(tweet, target, tweet.text, provider_id="identity", validated=True)
    translated = cache.get(tweet.text, tweet.language, target, provider.provider_id) if cache is not None else None
    if translated is None:
        try:
            translated = provider.translate(tweet.text, tweet.language, target)
        except ProviderError as exc:
            raise ProviderError(f"tweet {tweet.id!r}: {exc}", retryable=exc.retryable) from exc
        if not translated.strip():
            raise ProviderError(f"tweet {tweet.id!r}: provider returned empty translation")
        if cache is not None:
            cache.put(tweet.text, tweet.language, target, provider.provider_id, translated)
    hits: list[str] = []
    validated = True
    if glossary:
        for entry in glossary.applicable(tweet.language, target):
            if not _contains(tweet.text, entry.term):
                continue
            hits.append(entry.term)
            if _contains(translated, entry.required_rendering):
                continue
            term_rendering = provider.translate(entry.term, tweet.language, target).strip()
            if term_rendering and _contains(translated, term_rendering):
                translated = re.sub(
                    re.escape(term_rendering), entry.required_rendering, translated, flags=re.IGNORECASE
                )
            else:
                validated = False
    return TranslatedTweet(
        original=tweet,
        target_language=target,
        translated_text=translated,
        provider_id=provider.provider_id,
        glossary_hits=hits,
        validated=validated,
    )


@dataclass
class ValidationReport:
    flagged: list[tuple[str, str]] = field(default_factory=list)  # (tweet_id, term)
    checked: int = 0

    @property
    def all_validated(self) -> bool:
        return not self.flagged


def validate_translations(pairs: Sequence[TranslatedTweet], glossary: Glossary) -> ValidationReport:
    """Flag pairs whose source holds a glossary term that the output lacks."""
    report = ValidationReport()
    for pair in pairs:
        report.checked += 1
        if pair.target_language is pair.original.language:
            continue
        for entry in glossary.applicable(pair.original.language, pair.target_language):
            if _contains(pair.original.text, entry.term) and not _contains(
                pair.translated_text, entry.required_rendering
            ):
                report.flagged.append((pair.original.id, entry.term))
                pair.validated = False
    return report


@dataclass
class UnifiedCorpora:
    combined_english: Corpus
    combined_urdu: Corpus
    combined_spanish: Corpus
    joint: Corpus
    validation: Optional[ValidationReport] = None


class TranslationAbort(ProviderError):
    def __init__(self, message: str, completed: int, failed_tweet_id: str):
        super().__init__(message, retryable=True)
        self.completed = completed
        self.failed_tweet_id = failed_tweet_id


def _translate_corpus(
    corpora: Sequence[Corpus],
    target: Language,
    provider: TranslationProvider,
    glossary: Optional[Glossary],
    cache: Optional[TranslationCache],
    parallelism: int = 1,
) -> list[TranslatedTweet]:
    tweets = [t for corpus in corpora for t in corpus]
    results: list[Optional[TranslatedTweet]] = [None] * len(tweets)
    if parallelism <= 1:
        for i, tweet in enumerate(tweets):
            try:
                results[i] = translate_tweet(tweet, target, provider, glossary, cache)
            except ProviderError as exc:
                done = sum(1 for r in results if r is not None)
                if cache is not None:
                    cache.save()
                raise TranslationAbort(
                    f"translation to {target.value} aborted after {done}/{len(tweets)} tweets: {exc}",
                    completed=done,
                    failed_tweet_id=tweet.id,
                ) from exc
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {
                pool.submit(translate_tweet, tweet, target, provider, glossary, cache): i
                for i, tweet in enumerate(tweets)
            }
            first_error: Optional[tuple[str, ProviderError]] = None
            for future, i in futures.items():
                try:
                    results[i] = future.result()
                except ProviderError as exc:
                    if first_error is None:
                        first_error = (tweets[i].id, exc)
            if first_error is not None:
                done = sum(1 for r in results if r is not None)
                if cache is not None:
                    cache.save()
                raise TranslationAbort(
                    f"translation to {target.value} aborted after {done}/{len(tweets)} tweets: {first_error[1]}",
                    completed=done,
                    failed_tweet_id=first_error[0],
                ) from first_error[1]
    return [r for r in results if r is not None]


def build_unified_corpora(
    d_english: Corpus,
    d_urdu: Corpus,
    d_spanish: Corpus,
    provider: TranslationProvider,
    glossary: Optional[Glossary] = None,
    cache: Optional[TranslationCache] = None,
    parallelism: int = 1,
) -> UnifiedCorpora:
    """Build the three single-language corpora plus their joint concatenation.

    Every combined corpus holds all input tweets rendered in its target
    language (two translated corpora merged with the native one), assembled
    in input order (English, Urdu, Spanish). Labels are carried over
    unchanged. Joint ids gain a ``::<lang-code>`` suffix naming the pipeline
    of origin, since each tweet appears once per target language.
    """
    for corpus, language in ((d_english, Language.ENGLISH), (d_urdu, Language.URDU), (d_spanish, Language.SPANISH)):
        for tweet in corpus:
            if tweet.language is not language:
                raise DataError(f"corpus for {language.value} contains {tweet.language.value} tweet {tweet.id!r}")
            if tweet.label is None:
                raise DataError(f"tweet {tweet.id!r} is unlabeled; unification requires labeled corpora")

    inputs = (d_english, d_urdu, d_spanish)
    combined: dict[Language, Corpus] = {}
    all_pairs: list[TranslatedTweet] = []
    for target in (Language.ENGLISH, Language.URDU, Language.SPANISH):
        translated = _translate_corpus(inputs, target, provider, glossary, cache, parallelism)
        all_pairs.extend(translated)
        tweets = [
            Tweet(id=tt.original.id, text=tt.translated_text, language=target, label=tt.original.label)
            for tt in translated
        ]
        combined[target] = Corpus(tweets=tweets, provenance=f"combined-{LANG_CODES[target]}")

    joint_tweets = [
        Tweet(id=f"{t.id}::{LANG_CODES[target]}", text=t.text, language=t.language, label=t.label)
        for target in (Language.ENGLISH, Language.URDU, Language.SPANISH)
        for t in combined[target]
    ]
    if cache is not None:
        cache.save()
    return UnifiedCorpora(
        combined_english=combined[Language.ENGLISH],
        combined_urdu=combined[Language.URDU],
        combined_spanish=combined[Language.SPANISH],
        joint=Corpus(tweets=joint_tweets, provenance="joint"),
        validation=validate_translations(all_pairs, glossary) if glossary else None,
    )
