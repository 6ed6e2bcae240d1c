import json

import numpy as np
import pytest

from trihate.attention import AttentionConfig
from trihate.classifiers import (
    LlmConfig,
    ScriptedLlmProvider,
    attention_classifier_train,
    encoder_predict,
    llm_classify,
    parse_llm_response,
    run_experiment,
    svm_predict,
    svm_train,
)
from trihate.classifiers.llm import llm_classify_corpus, render_prompt, select_exemplars
from trihate.classifiers.svm import LinearModel, svm_objective
from trihate.corpus import Corpus, Label, Language, Tweet
from trihate.errors import ConfigError, DataError, ProviderError
from trihate.predictions import load_predictions, save_predictions
from trihate.preprocess import preprocess_corpus
from trihate.toydata import generate_toy_corpora

H, N = Label.HATEFUL, Label.NOT_HATEFUL


def separable_set():
    """Margin >= 1 around w = (1, 0), b = 0."""
    X = np.array(
        [[2.0, 0.3], [3.0, -1.0], [2.5, 0.8], [4.0, 0.0],
         [-2.0, 0.5], [-3.0, -0.2], [-2.5, 1.0], [-4.0, 0.0]]
    )
    y = [H] * 4 + [N] * 4
    return X, y


class TestSvmTrain:
    def test_separable_reaches_full_accuracy(self):
        X, y = separable_set()
        model = svm_train(X, y, C=1.0, epochs=200, seed=0)
        predictions = svm_predict(model, X)
        assert all(p.label is target for p, target in zip(predictions, y))

    def test_seed_determinism(self):
        X, y = separable_set()
        a = svm_train(X, y, C=1.0, epochs=100, seed=5)
        b = svm_train(X, y, C=1.0, epochs=100, seed=5)
        assert np.array_equal(a.weights, b.weights) and a.bias == b.bias

    def test_objective_trace_non_increasing(self):
        X, y = separable_set()
        model = svm_train(X, y, C=1.0, epochs=150, seed=0)
        trace = model.objective_trace
        assert all(later <= earlier + 1e-9 for earlier, later in zip(trace, trace[1:]))
        assert trace[-1] < trace[0]

    def test_trace_matches_recomputed_objective(self):
        X, y = separable_set()
        model = svm_train(X, y, C=1.0, epochs=50, seed=0)
        signs = np.array([1.0 if lab is H else -1.0 for lab in y])
        from scipy import sparse

        recomputed = svm_objective(sparse.csr_matrix(X), signs, model.weights, model.bias, 1.0)
        assert recomputed == pytest.approx(model.objective_trace[-1], abs=1e-9)

    def test_single_class_rejected(self):
        X = np.ones((3, 2))
        with pytest.raises(DataError):
            svm_train(X, [H, H, H], C=1.0, epochs=5, seed=0)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DataError):
            svm_train(np.ones((3, 2)), [H, N], C=1.0, epochs=5, seed=0)

    def test_scale_equivariance_of_argmax(self):
        """Scaling features by s and C by 1/s^2 preserves decisions."""
        X, y = separable_set()
        base = svm_predict(svm_train(X, y, C=1.0, epochs=300, seed=0), X)
        scaled = svm_predict(svm_train(X * 10.0, y, C=0.01, epochs=300, seed=0), X * 10.0)
        assert [p.label for p in base] == [p.label for p in scaled]


class TestSvmPredict:
    def test_sign_convention(self):
        model = LinearModel(weights=np.array([1.0, 0.0]), bias=0.0, C=1.0, seed=0)
        preds = svm_predict(model, np.array([[2.0, 0.0], [-2.0, 0.0]]))
        assert preds[0].label is H and preds[1].label is N
        assert preds[0].score == pytest.approx(2.0)

    def test_zero_score_maps_to_not_hateful(self):
        model = LinearModel(weights=np.zeros(2), bias=0.0, C=1.0, seed=0)
        preds = svm_predict(model, np.array([[5.0, 5.0]]))
        assert preds[0].label is N

    def test_batch_matches_dot_product_oracle(self):
        rng = np.random.default_rng(7)
        w = rng.normal(size=4)
        b = 0.37
        X = rng.normal(size=(6, 4))
        model = LinearModel(weights=w, bias=b, C=1.0, seed=0)
        preds = svm_predict(model, X)
        for i, p in enumerate(preds):
            score = sum(w[j] * X[i, j] for j in range(4)) + b
            assert p.score == pytest.approx(score)
            assert p.label is (H if score > 0 else N)

    def test_dimension_mismatch(self):
        model = LinearModel(weights=np.zeros(3), bias=0.0, C=1.0, seed=0)
        with pytest.raises(DataError):
            svm_predict(model, np.zeros((2, 5)))


def forty_tweet_corpus():
    corpora = generate_toy_corpora(seed=7)
    tweets = list(corpora[Language.ENGLISH].tweets) + list(corpora[Language.SPANISH].tweets)
    return preprocess_corpus(Corpus(tweets=tweets, provenance="toy-40"))


TINY = AttentionConfig(heads=2, d_k=8, d_v=8, d_model=16, n_max=12)


class TestAttentionClassifier:
    def test_toy_corpus_training_accuracy(self):
        corpus = forty_tweet_corpus()
        assert len(corpus) == 40
        classifier = attention_classifier_train(corpus, TINY, epochs=12, seed=3)
        predictions = encoder_predict(classifier, list(corpus))
        gold = {t.tweet_id: t.label for t in corpus}
        accuracy = sum(1 for p in predictions if p.label is gold[p.tweet_id]) / len(predictions)
        assert accuracy >= 0.9

    def test_loss_strictly_decreases_first_five_epochs(self):
        corpus = forty_tweet_corpus()
        classifier = attention_classifier_train(corpus, TINY, epochs=6, seed=3)
        trace = classifier.loss_trace
        assert all(trace[i + 1] < trace[i] for i in range(4))

    def test_zero_epochs_returns_initial_params(self):
        corpus = forty_tweet_corpus()
        classifier = attention_classifier_train(corpus, TINY, epochs=0, seed=3)
        from trihate.attention import init_encoder_params, params_to_vector

        fresh = init_encoder_params(len(classifier.token_ids) + 2, TINY, seed=3)
        assert np.array_equal(params_to_vector(classifier.params), params_to_vector(fresh))

    def test_seed_determinism(self):
        corpus = forty_tweet_corpus()
        from trihate.attention import params_to_vector

        a = attention_classifier_train(corpus, TINY, epochs=3, seed=9)
        b = attention_classifier_train(corpus, TINY, epochs=3, seed=9)
        assert np.array_equal(params_to_vector(a.params), params_to_vector(b.params))

    def test_empty_tokens_predicts_without_error(self):
        corpus = forty_tweet_corpus()
        classifier = attention_classifier_train(corpus, TINY, epochs=2, seed=3)
        from trihate.preprocess import ProcessedTweet

        ghost = ProcessedTweet("ghost", (), "", Language.ENGLISH, None)
        preds = encoder_predict(classifier, [ghost])
        assert preds[0].label in (H, N)


class TestParseLlmResponse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("Hateful", H),
            ("hateful", H),
            ("This tweet is NOT hateful.", N),
            ("Not-Hateful", N),
            ("Label: not hateful, definitely.", N),
            ("it is hateful, not borderline", H),
            ("unclear", None),
            ("", None),
            ("I think this is Hateful but could be Not-Hateful", N),
        ],
    )
    def test_precedence_table(self, text, expected):
        assert parse_llm_response(text) == expected


def make_tweet(text="some tweet", tweet_id="t1"):
    return Tweet(tweet_id, text, Language.ENGLISH, None)


class TestLlmClassify:
    def test_mock_hateful(self):
        provider = ScriptedLlmProvider({"mode": "sequence", "responses": ["Hateful"]})
        pred = llm_classify(make_tweet(), LlmConfig(), provider)
        assert pred.label is H

    def test_timeout_then_success_under_one_retry(self):
        provider = ScriptedLlmProvider({"mode": "sequence", "responses": ["TIMEOUT", "Not-Hateful"]})
        pred = llm_classify(make_tweet(), LlmConfig(max_retries=1), provider)
        assert pred.label is N

    def test_retries_exhausted_raise_retryable(self):
        provider = ScriptedLlmProvider({"mode": "sequence", "responses": ["TIMEOUT", "TIMEOUT", "TIMEOUT"]})
        with pytest.raises(ProviderError) as err:
            llm_classify(make_tweet(), LlmConfig(max_retries=1), provider)
        assert err.value.retryable

    def test_unparsable_becomes_abstain(self):
        provider = ScriptedLlmProvider({"mode": "sequence", "responses": ["I cannot decide"]})
        pred = llm_classify(make_tweet(), LlmConfig(), provider)
        assert pred.abstained

    def test_keyword_mock_reads_target_block_only(self):
        provider = ScriptedLlmProvider(
            {"mode": "keyword", "hateful_terms": ["dog"], "default": "Not-Hateful"}
        )
        config = LlmConfig()
        exemplars = [("you are a dog", H)]  # keyword present in the exemplar only
        assert llm_classify(make_tweet("you are a dog"), config, provider, exemplars).label is H
        assert llm_classify(make_tweet("nice weather"), config, provider, exemplars).label is N

    def test_prompt_contains_all_parts(self):
        template = "G: {guidelines}\nE:\n{exemplars}\nL: {language}\nTweet: {text}"
        prompt = render_prompt(template, make_tweet("hola"), [("ex1", H), ("ex2", N)], "be careful")
        assert "be careful" in prompt
        assert "ex1" in prompt and "Hateful" in prompt
        assert prompt.endswith("Tweet: hola")

    def test_exemplar_selection_pinned(self):
        tweets = [
            Tweet("a", "h1", Language.ENGLISH, H),
            Tweet("b", "n1", Language.ENGLISH, N),
            Tweet("c", "h2", Language.ENGLISH, H),
            Tweet("d", "n2", Language.ENGLISH, N),
        ]
        chosen = select_exemplars(tweets, shots_per_class=1)
        assert chosen == [("h1", H), ("n1", N)]

    def test_corpus_run_counts_abstains(self):
        provider = ScriptedLlmProvider(
            {"mode": "sequence", "responses": ["Hateful", "no idea", "Not hateful"]}
        )
        tweets = [make_tweet(f"text {i}", f"t{i}") for i in range(3)]
        run = llm_classify_corpus(tweets, LlmConfig(), provider)
        assert len(run.predictions) == 3
        assert run.abstained_ids == ["t1"]

    def test_mock_determinism(self, toy_dir):
        provider_a = ScriptedLlmProvider.from_file(toy_dir / "llm_script.json")
        provider_b = ScriptedLlmProvider.from_file(toy_dir / "llm_script.json")
        tweet = make_tweet("these people are trash")
        a = llm_classify(tweet, LlmConfig(), provider_a)
        b = llm_classify(tweet, LlmConfig(), provider_b)
        assert a == b


class TestRunExperiment:
    def test_svm_prediction_file_cardinality(self, tmp_path, toy_dir):
        from trihate.corpus import load_corpus

        corpus = load_corpus(toy_dir / "english.csv")
        result = run_experiment(corpus, {"type": "svm", "epochs": 50}, test_fraction=0.2, seed=7)
        assert len(result.predictions) == round(len(corpus) * 0.2)
        pred_path, meta_path = result.persist(tmp_path, "svm-en")
        assert len(load_predictions(pred_path)) == len(result.predictions)
        meta = json.loads(meta_path.read_text())
        assert meta["seed"] == 7 and meta["config_hash"]

    def test_rerun_is_identical(self, tmp_path, toy_dir):
        from trihate.corpus import load_corpus

        corpus = load_corpus(toy_dir / "english.csv")
        spec = {"type": "svm", "epochs": 50}
        first = run_experiment(corpus, spec, seed=7)
        second = run_experiment(corpus, spec, seed=7)
        first.persist(tmp_path, "a")
        second.persist(tmp_path, "b")
        assert (tmp_path / "a.predictions.csv").read_bytes() == (tmp_path / "b.predictions.csv").read_bytes()

    def test_llm_experiment_records_abstains(self, toy_dir):
        from trihate.corpus import load_corpus

        corpus = load_corpus(toy_dir / "english.csv")
        responses = ["no idea"] + ["Hateful"] * 10
        provider = ScriptedLlmProvider({"mode": "sequence", "responses": responses})
        result = run_experiment(corpus, {"type": "llm"}, seed=7, llm_provider=provider)
        assert result.metadata["abstain_count"] == 1
        assert len(result.abstained_ids) == 1

    def test_llm_without_provider_rejected(self, toy_dir):
        from trihate.corpus import load_corpus

        corpus = load_corpus(toy_dir / "english.csv")
        with pytest.raises(ConfigError):
            run_experiment(corpus, {"type": "llm"}, seed=7)

    def test_unknown_classifier_rejected(self, toy_dir):
        from trihate.corpus import load_corpus

        corpus = load_corpus(toy_dir / "english.csv")
        with pytest.raises(ConfigError):
            run_experiment(corpus, {"type": "forest"}, seed=7)


class TestPredictionPersistence:
    def test_round_trip_with_abstain(self, tmp_path):
        from trihate.predictions import Prediction

        predictions = [
            Prediction("t1", H, "svm", 1.5),
            Prediction("t2", None, "llm", None),
        ]
        path = tmp_path / "p.csv"
        save_predictions(predictions, path)
        loaded = load_predictions(path)
        assert loaded[0].label is H and loaded[0].score == 1.5
        assert loaded[1].abstained
