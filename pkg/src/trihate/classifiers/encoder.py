"""Training loop for the attention encoder classifier.

Token ids: 0 is padding, 1 is the unknown token, real vocabulary starts at
2. Class indices follow [Not-Hateful, Hateful] = [0, 1]. Tweets whose
token list is empty are fed as a single unknown token so the forward pass
stays total.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..attention import (
    AttentionConfig,
    EncoderParams,
    _encoder_forward,
    encoder_grad,
    grads_to_vector,
    init_encoder_params,
    params_to_vector,
    set_params_from_vector,
)
from ..corpus import Label
from ..errors import DataError
from ..preprocess import ProcessedCorpus, ProcessedTweet
from ..predictions import Prediction

UNK_ID = 1
CLASS_LABELS = (Label.NOT_HATEFUL, Label.HATEFUL)


@dataclass
class EncoderClassifier:
    params: EncoderParams
    token_ids: dict[str, int]
    loss_trace: list[float] = field(default_factory=list)
    classifier_id: str = "attention-encoder"

    def encode(self, tokens) -> list[int]:
        ids = [self.token_ids.get(t, UNK_ID) for t in tokens]
        return ids if ids else [UNK_ID]


def build_token_ids(corpus: ProcessedCorpus) -> dict[str, int]:
    mapping: dict[str, int] = {}
    for tweet in corpus:
        for token in tweet.tokens:
            if token not in mapping:
                mapping[token] = len(mapping) + 2  # 0=pad, 1=unk
    return mapping


def _examples(corpus: ProcessedCorpus, token_ids: dict[str, int]) -> list[tuple[list[int], int]]:
    examples = []
    for tweet in corpus:
        if tweet.label is None:
            raise DataError(f"tweet {tweet.tweet_id!r} is unlabeled; training requires labels")
        ids = [token_ids.get(t, UNK_ID) for t in tweet.tokens] or [UNK_ID]
        examples.append((ids, CLASS_LABELS.index(tweet.label)))
    return examples


def attention_classifier_train(
    corpus: ProcessedCorpus,
    config: AttentionConfig,
    epochs: int = 30,
    learning_rate: float = 0.1,
    batch_size: int = 8,
    seed: int = 0,
) -> EncoderClassifier:
    """Mini-batch gradient descent (Adagrad scaling) on mean cross-entropy.

    Deterministic for a given seed: initialization and the per-epoch
    shuffling schedule both derive from it. Divergence aborts with the
    loss trace in the message.
    """
    token_ids = build_token_ids(corpus)
    params = init_encoder_params(len(token_ids) + 2, config, seed=seed)
    examples = _examples(corpus, token_ids)
    if not examples:
        raise DataError("attention_classifier_train: empty corpus")

    vector = params_to_vector(params)
    accumulator = np.full_like(vector, 1e-8)
    rng = np.random.default_rng(seed)
    order = np.arange(len(examples))
    trace: list[float] = []
    for _ in range(epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(order), batch_size):
            batch = [examples[i] for i in order[start : start + batch_size]]
            loss, grads = encoder_grad(batch, params)
            g = grads_to_vector(grads)
            accumulator += g * g
            vector -= learning_rate * g / np.sqrt(accumulator)
            set_params_from_vector(params, vector)
            epoch_loss += loss
            batches += 1
        epoch_loss /= batches
        if not np.isfinite(epoch_loss):
            raise DataError(f"attention_classifier_train diverged; loss trace: {trace + [epoch_loss]}")
        trace.append(epoch_loss)
    return EncoderClassifier(params=params, token_ids=token_ids, loss_trace=trace)


def encoder_predict(classifier: EncoderClassifier, tweets: list[ProcessedTweet]) -> list[Prediction]:
    out = []
    for tweet in tweets:
        logits, _ = _encoder_forward(classifier.encode(tweet.tokens), classifier.params)
        idx = int(np.argmax(logits))
        out.append(
            Prediction(
                tweet_id=tweet.tweet_id,
                label=CLASS_LABELS[idx],
                classifier_id=classifier.classifier_id,
                score=float(logits[idx] - logits[1 - idx]),
            )
        )
    return out
