"""Train/predict orchestration: one experiment = one classifier on one split."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..attention import AttentionConfig, EncoderParams, save_encoder_params
from ..corpus import Corpus, stratified_split
from ..errors import ConfigError
from ..features.tfidf import IdfMode, build_vocabulary, tfidf_matrix
from ..predictions import Prediction, save_predictions
from ..preprocess import StemRuleTable, StopwordTable, preprocess_corpus
from .encoder import attention_classifier_train, encoder_predict
from .llm import LlmConfig, LlmProvider, llm_classify_corpus, select_exemplars
from .svm import svm_predict, svm_train

GUIDELINES_FOR_PROMPTS = (
    "Hateful means the tweet attacks, demeans or threatens a person or group "
    "(insults, slurs, prejudice, incitement). Not-Hateful means no abusive "
    "intent, even if negative or frustrated."
)


def config_hash(spec: dict) -> str:
    return hashlib.sha256(json.dumps(spec, sort_keys=True).encode("utf-8")).hexdigest()[:16]


@dataclass
class ExperimentResult:
    predictions: list[Prediction]
    metadata: dict
    abstained_ids: list[str] = field(default_factory=list)
    checkpoint: Optional[EncoderParams] = None

    def persist(self, out_dir: str | Path, stem: str) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        pred_path = out_dir / f"{stem}.predictions.csv"
        meta_path = out_dir / f"{stem}.meta.json"
        save_predictions(self.predictions, pred_path)
        meta_path.write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if self.checkpoint is not None:
            save_encoder_params(self.checkpoint, out_dir / f"{stem}.ckpt")
        return pred_path, meta_path


def run_experiment(
    corpus: Corpus,
    spec: dict,
    test_fraction: float = 0.2,
    seed: int = 0,
    stopwords: Optional[StopwordTable] = None,
    stem_rules: Optional[StemRuleTable] = None,
    llm_provider: Optional[LlmProvider] = None,
) -> ExperimentResult:
    """Split, train where applicable, and predict the test half.

    ``spec["type"]`` selects the classifier family: "svm", "attention" or
    "llm". Metadata records the seed, split fraction and a hash of the spec
    so reruns are attributable.
    """
    kind = spec.get("type")
    train, test = stratified_split(corpus, test_fraction, seed)
    metadata = {
        "classifier": kind,
        "seed": seed,
        "test_fraction": test_fraction,
        "config_hash": config_hash(spec),
        "train_size": len(train),
        "test_size": len(test),
        "spec": spec,
    }
    abstained: list[str] = []
    checkpoint: Optional[EncoderParams] = None

    if kind == "svm":
        train_proc = preprocess_corpus(train, stopwords, stem_rules)
        test_proc = preprocess_corpus(test, stopwords, stem_rules)
        vocab = build_vocabulary([t.tokens for t in train_proc])
        idf_mode = IdfMode(spec.get("idf_mode", "literal"))
        train_features = tfidf_matrix(
            [t.tokens for t in train_proc], [t.tweet_id for t in train_proc], vocab, idf_mode
        )
        test_features = tfidf_matrix(
            [t.tokens for t in test_proc], [t.tweet_id for t in test_proc], vocab, idf_mode
        )
        model = svm_train(
            train_features,
            [t.label for t in train_proc],
            C=spec.get("C", 1.0),
            epochs=spec.get("epochs", 200),
            seed=seed,
            learning_rate=spec.get("learning_rate", 0.1),
        )
        predictions = svm_predict(model, test_features)
        metadata["final_objective"] = model.objective_trace[-1]
    elif kind == "attention":
        train_proc = preprocess_corpus(train, stopwords, stem_rules)
        test_proc = preprocess_corpus(test, stopwords, stem_rules)
        config = AttentionConfig(
            heads=spec.get("heads", 2),
            d_k=spec.get("d_k", 8),
            d_v=spec.get("d_v", 8),
            d_model=spec.get("d_model", 16),
            n_max=spec.get("n_max", 16),
        )
        classifier = attention_classifier_train(
            train_proc,
            config,
            epochs=spec.get("epochs", 20),
            learning_rate=spec.get("learning_rate", 0.1),
            batch_size=spec.get("batch_size", 8),
            seed=seed,
        )
        predictions = encoder_predict(classifier, list(test_proc))
        metadata["loss_trace"] = classifier.loss_trace
        checkpoint = classifier.params
    elif kind == "llm":
        if llm_provider is None:
            raise ConfigError("llm experiment requires a provider (mock or live)")
        config = LlmConfig(
            endpoint=spec.get("endpoint", ""),
            model=spec.get("model", "mock"),
            prompt_template=spec.get("prompt_template", "fewshot-v1"),
            shots_per_class=spec.get("shots_per_class", 3),
            max_retries=spec.get("max_retries", 1),
            classifier_id=spec.get("classifier_id", "llm"),
        )
        exemplars = select_exemplars(list(train), config.shots_per_class)
        run = llm_classify_corpus(list(test), config, llm_provider, exemplars, GUIDELINES_FOR_PROMPTS)
        predictions = run.predictions
        abstained = run.abstained_ids
        metadata["abstain_count"] = len(abstained)
    else:
        raise ConfigError(f"unknown classifier type {kind!r} (expected svm, attention or llm)")

    return ExperimentResult(
        predictions=predictions, metadata=metadata, abstained_ids=abstained, checkpoint=checkpoint
    )
