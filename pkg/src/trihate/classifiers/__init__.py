from .svm import LinearModel, svm_predict, svm_train
from .encoder import EncoderClassifier, attention_classifier_train, encoder_predict
from .llm import (
    HttpLlmProvider,
    LlmConfig,
    ScriptedLlmProvider,
    llm_classify,
    parse_llm_response,
)
from .experiment import ExperimentResult, run_experiment

__all__ = [
    "EncoderClassifier",
    "ExperimentResult",
    "HttpLlmProvider",
    "LinearModel",
    "LlmConfig",
    "ScriptedLlmProvider",
    "attention_classifier_train",
    "encoder_predict",
    "llm_classify",
    "parse_llm_response",
    "run_experiment",
    "svm_predict",
    "svm_train",
]
