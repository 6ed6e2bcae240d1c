import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trihate.errors import DataError
from trihate.features import (
    IdfMode,
    NgramTable,
    build_cooccurrence,
    build_ngram_table,
    build_vocabulary,
    fasttext_embed,
    glove_cost,
    glove_grad,
    glove_train,
    inverse_document_frequency,
    term_frequency,
    tfidf_matrix,
    word_ngrams,
)
from trihate.features.fasttext import fnv1a, load_ngram_table, save_ngram_table
from trihate.features.glove import GloveParams


class TestTermFrequency:
    def test_two_in_ten(self):
        doc = ["t"] * 2 + ["x"] * 8
        assert term_frequency("t", doc) == 0.2

    def test_absent_term(self):
        assert term_frequency("z", ["a", "b"]) == 0.0

    def test_whole_document(self):
        assert term_frequency("t", ["t"]) == 1.0

    def test_empty_document_rejected(self):
        with pytest.raises(DataError):
            term_frequency("t", [])


class TestInverseDocumentFrequency:
    def test_literal_ratio(self):
        vocab = build_vocabulary([["a"], ["a", "b"], ["c"], ["d"]])
        assert inverse_document_frequency("b", vocab) == 4.0
        vocab2 = build_vocabulary([["a", "b"], ["b"], ["c", "b"], ["b"]])
        assert inverse_document_frequency("b", vocab2) == 1.0  # term in every doc

    def test_unseen_term_rejected(self):
        vocab = build_vocabulary([["a"]])
        with pytest.raises(DataError):
            inverse_document_frequency("zzz", vocab)

    def test_log_mode(self):
        vocab = build_vocabulary([["a"], ["a"], ["b"], ["c"]])
        expected = np.log((1 + 4) / (1 + 2)) + 1.0
        assert inverse_document_frequency("a", vocab, mode=IdfMode.LOG) == pytest.approx(expected)


class TestTfidfMatrix:
    def test_two_doc_fixture_matches_hand_computation(self):
        docs = [["dog", "bites", "dog"], ["cat", "bites"]]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0", "d1"], vocab)
        dense = fm.matrix.toarray()
        # hand-computed per-cell Eq.1 x Eq.2: N=2; df(dog)=1, df(bites)=2, df(cat)=1
        assert dense[0, vocab.index["dog"]] == pytest.approx((2 / 3) * (2 / 1))
        assert dense[0, vocab.index["bites"]] == pytest.approx((1 / 3) * (2 / 2))
        assert dense[0, vocab.index["cat"]] == 0.0
        assert dense[1, vocab.index["cat"]] == pytest.approx((1 / 2) * (2 / 1))
        assert dense[1, vocab.index["bites"]] == pytest.approx((1 / 2) * (2 / 2))

    def test_chain_02_x_2(self):
        # TF 0.2 x IDF 2.0 = 0.4, the literal arithmetic chain
        docs = [["t", "x", "x", "x", "x"], ["y"]]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0", "d1"], vocab)
        assert term_frequency("t", docs[0]) == 0.2
        assert inverse_document_frequency("t", vocab) == 2.0
        assert fm.matrix.toarray()[0, vocab.index["t"]] == pytest.approx(0.4)

    def test_empty_document_row_is_zero(self):
        docs = [["a", "b"], []]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0", "d1"], vocab)
        assert fm.matrix.toarray()[1].sum() == 0.0

    def test_single_doc_literal_idf_is_one(self):
        docs = [["a", "b", "a"]]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0"], vocab)
        dense = fm.matrix.toarray()
        assert dense[0, vocab.index["a"]] == pytest.approx(2 / 3)
        assert dense[0, vocab.index["b"]] == pytest.approx(1 / 3)

    def test_unseen_tokens_dropped(self):
        train = [["a", "b"]]
        vocab = build_vocabulary(train)
        fm = tfidf_matrix([["a", "zzz"]], ["d0"], vocab)
        assert fm.matrix.shape == (1, 2)
        assert fm.matrix.toarray()[0, vocab.index["a"]] > 0

    def test_all_cells_nonnegative_literal_idf_ge_one(self):
        docs = [["a", "b"], ["a", "c"], ["d"]]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0", "d1", "d2"], vocab)
        assert (fm.matrix.toarray() >= 0).all()
        for token in vocab.tokens:
            assert inverse_document_frequency(token, vocab) >= 1.0

    def test_export_triplets(self, tmp_path):
        docs = [["a", "b"], ["b"]]
        vocab = build_vocabulary(docs)
        fm = tfidf_matrix(docs, ["d0", "d1"], vocab)
        path = tmp_path / "m.csv"
        fm.export_triplets(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "row,col,value"
        assert len(lines) == 1 + fm.matrix.nnz


class TestFastText:
    def test_ngrams_boundary_marked(self):
        grams = word_ngrams("dog", 3, 5)
        assert "<do" in grams and "og>" in grams and "dog" in grams
        assert "<dog>" not in grams  # whole word handled separately

    def test_zero_table_gives_zero_vector(self):
        table = NgramTable(dim=4, buckets=16, bucket_vectors=np.zeros((16, 4)))
        assert np.array_equal(fasttext_embed("word", table), np.zeros(4))

    def test_two_ngram_sum(self):
        # word "ab" -> marked "<ab>": n-grams of len 3..5 are "<ab", "ab>", "<ab>"
        # minus the whole marked word -> {"<ab", "ab>"}
        table = NgramTable(dim=2, buckets=64, bucket_vectors=np.zeros((64, 2)))
        g1, g2 = word_ngrams("ab", 3, 5)
        table.bucket_vectors[fnv1a(g1) % 64] = np.array([1.0, 2.0])
        table.bucket_vectors[fnv1a(g2) % 64] += np.array([10.0, 20.0])
        expected = table.ngram_vector(g1) + table.ngram_vector(g2)
        assert np.allclose(fasttext_embed("ab", table), expected)

    def test_oov_word_is_finite(self):
        table = build_ngram_table(["known"], dim=8, seed=1)
        vec = fasttext_embed("neverseenbefore", table)
        assert np.all(np.isfinite(vec)) and vec.shape == (8,)

    def test_whole_word_vector_added(self):
        table = build_ngram_table(["dog"], dim=8, seed=1)
        with_word = fasttext_embed("dog", table)
        del table.word_vectors["dog"]
        without = fasttext_embed("dog", table)
        assert not np.allclose(with_word, without)

    @given(word=st.text(alphabet="abcdefgh", min_size=1, max_size=10))
    @settings(max_examples=100)
    def test_additive_reconstruction(self, word):
        table = build_ngram_table([word], dim=6, seed=2)
        manual = sum((table.ngram_vector(g) for g in word_ngrams(word, 3, 5)), np.zeros(6))
        manual = manual + table.word_vectors[word]
        assert np.allclose(fasttext_embed(word, table), manual)

    def test_deterministic_from_seed(self):
        a = build_ngram_table(["x", "y"], dim=8, seed=9)
        b = build_ngram_table(["x", "y"], dim=8, seed=9)
        assert np.array_equal(a.bucket_vectors, b.bucket_vectors)
        assert np.array_equal(a.word_vectors["x"], b.word_vectors["x"])

    def test_save_load_round_trip(self, tmp_path):
        table = build_ngram_table(["dog", "cat"], dim=4, buckets=8, seed=3)
        path = tmp_path / "table.txt"
        save_ngram_table(table, path)
        loaded = load_ngram_table(path)
        assert loaded.dim == 4 and loaded.buckets == 8 and loaded.seed == 3
        assert np.array_equal(loaded.bucket_vectors, table.bucket_vectors)
        for word in ("dog", "cat"):
            assert np.array_equal(loaded.word_vectors[word], table.word_vectors[word])


def brute_force_cooccurrence(docs, window):
    """O(L^2) pair enumeration."""
    cells = {}
    vocab_order = []
    index = {}
    for doc in docs:
        for token in doc:
            if token not in index:
                index[token] = len(vocab_order)
                vocab_order.append(token)
    for doc in docs:
        ids = [index[t] for t in doc]
        for a in range(len(ids)):
            for b in range(len(ids)):
                d = b - a
                if a == b or abs(d) > window or ids[a] == ids[b]:
                    continue
                if d > 0:  # count each unordered pair once, then mirror
                    cells[(ids[a], ids[b])] = cells.get((ids[a], ids[b]), 0.0) + 1.0 / d
                    cells[(ids[b], ids[a])] = cells.get((ids[b], ids[a]), 0.0) + 1.0 / d
    return cells


class TestCooccurrence:
    def test_single_pair(self):
        cooc = build_cooccurrence([["a", "b"]], window=1)
        i, j = cooc.vocabulary.index["a"], cooc.vocabulary.index["b"]
        assert cooc.value(i, j) == 1.0
        assert cooc.value(j, i) == 1.0

    def test_aba_matches_brute_force(self):
        docs = [["a", "b", "a"]]
        cooc = build_cooccurrence(docs, window=2)
        assert dict(cooc.cells) == brute_force_cooccurrence(docs, 2)

    def test_empty_corpus(self):
        cooc = build_cooccurrence([], window=3)
        assert cooc.cells == {}

    def test_window_validation(self):
        with pytest.raises(DataError):
            build_cooccurrence([["a"]], window=0)

    @given(
        docs=st.lists(
            st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=1, max_size=8),
            min_size=1,
            max_size=4,
        ),
        window=st.integers(1, 4),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry_and_brute_force(self, docs, window):
        cooc = build_cooccurrence(docs, window=window)
        for (i, j), x in cooc.cells.items():
            assert i != j
            assert x >= 0
            assert cooc.value(j, i) == pytest.approx(x)
        assert {k: pytest.approx(v) for k, v in brute_force_cooccurrence(docs, window).items()} == cooc.cells


TOY_6WORD_DOCS = [
    ["dog", "bites", "man"],
    ["man", "bites", "dog"],
    ["cat", "sees", "bird", "cat"],
    ["bird", "sees", "cat"],
    ["dog", "sees", "man", "dog"],
]


def fitted_params(cooc, dim=2):
    """Parameters engineered so every residual is exactly zero."""
    size = len(cooc.vocabulary)
    return GloveParams(
        word_vectors=np.zeros((size, dim)),
        context_vectors=np.zeros((size, dim)),
        word_bias=np.array([0.0] * size),
        context_bias=np.zeros(size),
        x_max=100.0,
        alpha=0.75,
    )


class TestGloveCost:
    def test_exact_fit_is_zero(self):
        cooc = build_cooccurrence([["a", "b"]], window=1)
        params = fitted_params(cooc)
        # residual = 0 + b_i + b_j - ln(1) = 0 for the single pair (x=1)
        assert glove_cost(cooc, params) == 0.0

    def test_single_pair_hand_evaluation(self):
        cooc = build_cooccurrence([["a", "b"]], window=1)  # X_ab = X_ba = 1
        params = fitted_params(cooc)
        params.word_bias[:] = 2.0  # residual = 2 + 0 - 0 = 2 per directed cell
        weight = (1.0 / 100.0) ** 0.75
        assert glove_cost(cooc, params) == pytest.approx(2 * weight * 4.0)

    def test_moving_away_from_fit_increases_cost(self):
        cooc = build_cooccurrence(TOY_6WORD_DOCS, window=2)
        params, _ = glove_train(cooc, dim=4, epochs=30, seed=0)
        base = glove_cost(cooc, params)
        params.word_bias += 1.0
        assert glove_cost(cooc, params) > base

    def test_weighting_caps_at_one(self):
        cooc = build_cooccurrence([["a", "b"] * 60], window=1)  # x > x_max
        params = fitted_params(cooc)
        params.word_bias[:] = 1.0
        i, j = cooc.vocabulary.index["a"], cooc.vocabulary.index["b"]
        x = cooc.value(i, j)
        assert x > 100.0
        residual = 1.0 - np.log(x)  # word bias only; context bias stays 0
        assert glove_cost(cooc, params) == pytest.approx(2 * residual**2)


class TestGloveGrad:
    def test_matches_finite_differences(self):
        docs = [["a", "b", "c", "a"]]
        cooc = build_cooccurrence(docs, window=2)
        rng = np.random.default_rng(5)
        size, dim = len(cooc.vocabulary), 3
        params = GloveParams(
            word_vectors=rng.normal(size=(size, dim)) * 0.4,
            context_vectors=rng.normal(size=(size, dim)) * 0.4,
            word_bias=rng.normal(size=size) * 0.4,
            context_bias=rng.normal(size=size) * 0.4,
            x_max=2.0,
        )
        grads = glove_grad(cooc, params)
        eps = 1e-6
        for name in ("word_vectors", "context_vectors", "word_bias", "context_bias"):
            array = getattr(params, name)
            for idx in np.ndindex(array.shape):
                original = array[idx]
                array[idx] = original + eps
                up = glove_cost(cooc, params)
                array[idx] = original - eps
                down = glove_cost(cooc, params)
                array[idx] = original
                fd = (up - down) / (2 * eps)
                analytic = grads[name][idx]
                assert abs(fd - analytic) <= 1e-4 * max(abs(fd), abs(analytic), 1.0)


class TestGloveTrain:
    def test_toy_corpus_halves_cost(self):
        cooc = build_cooccurrence(TOY_6WORD_DOCS, window=3)
        assert len(cooc.vocabulary) == 6
        _, costs = glove_train(cooc, dim=8, epochs=50, learning_rate=0.05, seed=1)
        assert costs[-1] < 0.5 * costs[0]

    def test_deterministic(self):
        cooc = build_cooccurrence(TOY_6WORD_DOCS, window=3)
        a, costs_a = glove_train(cooc, dim=8, epochs=10, seed=4)
        b, costs_b = glove_train(cooc, dim=8, epochs=10, seed=4)
        assert np.array_equal(a.word_vectors, b.word_vectors)
        assert np.array_equal(a.context_bias, b.context_bias)
        assert costs_a == costs_b

    def test_empty_matrix_rejected(self):
        cooc = build_cooccurrence([], window=2)
        with pytest.raises(DataError):
            glove_train(cooc, dim=4)

    def test_cost_never_increases_across_epochs_on_fixture(self):
        cooc = build_cooccurrence(TOY_6WORD_DOCS, window=3)
        _, costs = glove_train(cooc, dim=8, epochs=50, learning_rate=0.05, seed=1)
        for earlier, later in zip(costs, costs[1:]):
            assert later <= earlier + 1e-9
