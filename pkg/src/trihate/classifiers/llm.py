"""Few-shot LLM classification over a chat-completion-style HTTP API.

Prompt templates are versioned text files with named placeholders; every
degree of freedom (exemplars, temperature, template) is pinned so runs are
reproducible. Unparsable responses become abstains, never silent defaults.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Protocol, Sequence

import httpx

from ..corpus import Label, Tweet
from ..errors import DataError, ProviderError
from ..predictions import Prediction

NOT_HATEFUL_RE = re.compile(r"not[\s-]?hateful", re.IGNORECASE)
HATEFUL_RE = re.compile(r"hateful", re.IGNORECASE)


@dataclass
class LlmConfig:
    endpoint: str = ""
    model: str = "mock"
    prompt_template: str = "fewshot-v1"
    shots_per_class: int = 3
    temperature: float = 0.0
    timeout: float = 60.0
    max_retries: int = 1
    classifier_id: str = "llm"

    def __post_init__(self):
        if self.shots_per_class < 0:
            raise DataError("shots_per_class must be >= 0")


class LlmProvider(Protocol):
    def complete(self, prompt: str) -> str: ...


class ScriptedLlmProvider:
    """Mock driven by a response-script file (JSON).

    Two modes:
      {"mode": "sequence", "responses": ["Hateful", "TIMEOUT", ...]}
        replies in order; the literal "TIMEOUT" raises a retryable error.
      {"mode": "keyword", "hateful_terms": [...], "default": "Not-Hateful"}
        replies "Hateful" when any term occurs in the prompt's target
        block, else the default. Fully deterministic either way.
    """

    def __init__(self, script: dict):
        self.mode = script.get("mode", "sequence")
        if self.mode == "sequence":
            self._responses = list(script.get("responses", []))
            self._cursor = 0
        elif self.mode == "keyword":
            self._terms = [t.lower() for t in script.get("hateful_terms", [])]
            self._default = script.get("default", "Not-Hateful")
        else:
            raise DataError(f"unknown mock llm mode {self.mode!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedLlmProvider":
        path = Path(path)
        if not path.exists():
            raise DataError(f"llm response script not found: {path}")
        return cls(json.loads(path.read_text(encoding="utf-8")))

    def complete(self, prompt: str) -> str:
        if self.mode == "sequence":
            if self._cursor >= len(self._responses):
                raise ProviderError("mock llm script exhausted")
            response = self._responses[self._cursor]
            self._cursor += 1
            if response == "TIMEOUT":
                raise ProviderError("mock timeout", retryable=True)
            return response
        target = prompt.rsplit("Tweet:", 1)[-1].lower()
        if any(term in target for term in self._terms):
            return "Hateful"
        return self._default


class HttpLlmProvider:
    """Chat-completion client; API key via environment variable."""

    def __init__(
        self,
        config: LlmConfig,
        api_key_env: str = "LLM_API_KEY",
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.config = config
        self.api_key = os.environ.get(api_key_env, "")
        self._client = httpx.Client(timeout=config.timeout, transport=transport)

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = self._client.post(self.config.endpoint, json=payload, headers=headers)
        except httpx.HTTPError as exc:
            raise ProviderError(f"llm request failed: {exc}", retryable=True) from exc
        if response.status_code >= 500 or response.status_code == 429:
            raise ProviderError(f"llm endpoint returned {response.status_code}", retryable=True)
        if response.status_code != 200:
            raise ProviderError(f"llm endpoint returned {response.status_code}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"malformed llm response: {exc}") from exc


def parse_llm_response(text: str) -> Optional[Label]:
    """Map free-form model output to a label; None means abstain.

    "not-hateful" / "not hateful" outranks "hateful" whenever both occur,
    since the latter is a substring of the former.
    """
    if NOT_HATEFUL_RE.search(text):
        return Label.NOT_HATEFUL
    if HATEFUL_RE.search(text):
        return Label.HATEFUL
    return None


def load_prompt_template(name_or_path: str) -> str:
    path = Path(name_or_path)
    if path.exists():
        return path.read_text(encoding="utf-8")
    builtin = resources.files("trihate").joinpath("data", "prompts", f"{name_or_path}.txt")
    if builtin.is_file():
        return builtin.read_text(encoding="utf-8")
    raise DataError(f"prompt template not found: {name_or_path}")


def render_prompt(
    template: str,
    tweet: Tweet,
    exemplars: Sequence[tuple[str, Label]],
    guidelines: str,
) -> str:
    exemplar_lines = "\n".join(f"Tweet: {text}\nLabel: {label.value}" for text, label in exemplars)
    return (
        template.replace("{guidelines}", guidelines)
        .replace("{exemplars}", exemplar_lines)
        .replace("{language}", tweet.language.value)
        .replace("{text}", tweet.text)
    )


def select_exemplars(train_tweets: Sequence[Tweet], shots_per_class: int) -> list[tuple[str, Label]]:
    """First N labeled tweets per class in corpus order: pinned, not sampled."""
    chosen: list[tuple[str, Label]] = []
    for label in (Label.HATEFUL, Label.NOT_HATEFUL):
        count = 0
        for tweet in train_tweets:
            if tweet.label is label:
                chosen.append((tweet.text, label))
                count += 1
                if count >= shots_per_class:
                    break
    return chosen


@dataclass
class LlmRun:
    predictions: list[Prediction] = field(default_factory=list)
    abstained_ids: list[str] = field(default_factory=list)


def llm_classify(
    tweet: Tweet,
    config: LlmConfig,
    provider: LlmProvider,
    exemplars: Sequence[tuple[str, Label]] = (),
    guidelines: str = "",
    backoff_base: float = 0.0,
) -> Prediction:
    """One request per tweet; retryable provider failures are retried up to
    ``config.max_retries`` times, then surface as retryable errors."""
    template = load_prompt_template(config.prompt_template)
    prompt = render_prompt(template, tweet, exemplars, guidelines)
    last_error: Optional[ProviderError] = None
    for attempt in range(config.max_retries + 1):
        if attempt and backoff_base:
            time.sleep(backoff_base * (2 ** (attempt - 1)))
        try:
            response = provider.complete(prompt)
            break
        except ProviderError as exc:
            if not exc.retryable:
                raise
            last_error = exc
    else:
        raise ProviderError(f"tweet {tweet.id!r}: {last_error}", retryable=True)
    return Prediction(
        tweet_id=tweet.id,
        label=parse_llm_response(response),
        classifier_id=config.classifier_id,
        score=None,
    )


def llm_classify_corpus(
    tweets: Sequence[Tweet],
    config: LlmConfig,
    provider: LlmProvider,
    exemplars: Sequence[tuple[str, Label]] = (),
    guidelines: str = "",
) -> LlmRun:
    run = LlmRun()
    for tweet in tweets:
        prediction = llm_classify(tweet, config, provider, exemplars, guidelines)
        run.predictions.append(prediction)
        if prediction.abstained:
            run.abstained_ids.append(tweet.id)
    return run
