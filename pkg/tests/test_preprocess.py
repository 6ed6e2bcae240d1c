import re
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trihate.corpus import Corpus, Label, Language, Tweet
from trihate.errors import DataError
from trihate.preprocess import (
    EMOJI_RANGES,
    clean,
    default_stem_rules,
    default_stopwords,
    load_processed,
    load_stem_rules,
    preprocess_corpus,
    remove_stopwords,
    save_processed,
    stem,
    tokenize,
)

EN, UR, ES = Language.ENGLISH, Language.URDU, Language.SPANISH


def oracle_clean(text):
    """Independent rule-by-rule application of the documented cleaning."""
    text = re.sub(r"(?:https?://|www\.)\S+", " ", text)
    out = []
    for ch in text:
        code = ord(ch)
        if any(lo <= code <= hi for lo, hi in EMOJI_RANGES):
            out.append(" ")
        elif unicodedata.category(ch)[0] in "PS" or unicodedata.category(ch) == "Nd":
            continue
        else:
            out.append(ch)
    return " ".join("".join(out).lower().split())


CLEAN_FIXTURES = [
    "Check #Hate http://x.co 123 !!",
    "@user you are #stupid :) 99 https://t.co/abc",
    "don't touch my co-op account",
    "ALL CAPS and MiXeD case",
    "emoji \U0001f600 inside ❤️ text",
    "  spaced    out\ttabs \n lines ",
    "Numbers 123 mixed456with text",
    "www.example.com/path?q=1 trailing",
]


class TestClean:
    def test_hashtag_url_numbers(self):
        assert clean("Check #Hate http://x.co 123 !!") == "check hate"

    def test_empty(self):
        assert clean("") == ""

    def test_caseless_script_unchanged(self):
        text = "یہ ایک سادہ جملہ ہے"
        assert clean(text) == text

    @pytest.mark.parametrize("text", CLEAN_FIXTURES)
    def test_matches_rule_oracle(self, text):
        assert clean(text) == oracle_clean(text)

    def test_no_digits_punct_emoji_survive(self):
        cleaned = clean("a1! b2? c3# \U0001f621 x")
        assert not re.search(r"[0-9!?#]", cleaned)


class TestTokenize:
    def test_basic(self):
        assert tokenize("check hate") == ["check", "hate"]

    def test_whitespace_runs(self):
        assert tokenize("  a  b ") == ["a", "b"]

    def test_empty(self):
        assert tokenize("") == []


class TestRemoveStopwords:
    def test_english_stopword(self):
        table = default_stopwords()
        assert remove_stopwords(["the", "dog"], EN, table) == ["dog"]

    def test_short_token_filter(self):
        table = default_stopwords()
        assert remove_stopwords(["ab", "abc"], EN, table) == ["abc"]

    def test_empty(self):
        assert remove_stopwords([], EN, default_stopwords()) == []

    def test_unknown_language_table(self):
        from trihate.preprocess import StopwordTable

        with pytest.raises(DataError):
            remove_stopwords(["x"], EN, StopwordTable(by_language={}))

    def test_filter_disabled(self):
        table = default_stopwords()
        assert remove_stopwords(["ab", "abc"], EN, table, min_token_len=0) == ["ab", "abc"]


def oracle_stem(word, rules):
    """Independent re-implementation: longest-suffix rule to a fixpoint."""
    seen = []
    while word not in seen:
        seen.append(word)
        for rule in sorted(rules, key=lambda r: (-len(r.suffix), r.suffix)):
            stem_len = len(word) - len(rule.suffix)
            if word.endswith(rule.suffix) and stem_len >= rule.min_stem_len:
                word = word[:stem_len] + rule.replacement
                break
        else:
            return word
    cycle = seen[seen.index(word):]
    return min(cycle)


STEM_FIXTURES = {
    EN: [
        "hating", "hated", "hates", "haters", "dogs", "killing", "killers",
        "quickly", "kindness", "classes", "ladies", "cried", "trying",
        "hateful", "dumbest", "meetings", "harassment", "dog", "see", "ugliest",
    ],
    ES: [
        "odiando", "mataron", "perros", "idiotas", "mujeres", "finalmente",
        "comiendo", "comieron", "cabrones", "rápidamente", "putas", "gente",
        "basura", "animales", "humanos", "noticias", "amigos", "vida", "perro", "día",
    ],
    UR: [
        "کتے", "کتابیں", "لڑکوں", "بلیاں", "احمقوں", "خبروں", "دوستو",
        "جانور", "انسان", "زندگی", "موسم", "مدد", "لوگ", "کچرا", "نفرت",
        "بیوقوف", "حمایت", "شکریہ", "اچھا", "برباد",
    ],
}


class TestStem:
    def test_paper_example(self):
        assert stem(["hating"], EN) == ["hate"]

    def test_no_applicable_suffix(self):
        assert stem(["dog"], EN) == ["dog"]

    @pytest.mark.parametrize("language", [EN, ES, UR])
    def test_fixture_matches_rule_table_oracle(self, language):
        rules = default_stem_rules().rules(language)
        words = STEM_FIXTURES[language]
        assert len(words) == 20
        assert stem(words, language) == [oracle_stem(w, rules) for w in words]

    @pytest.mark.parametrize("language", [EN, ES, UR])
    @given(word=st.text(alphabet=st.characters(whitelist_categories=["Ll", "Lo"]), min_size=1, max_size=12))
    @settings(max_examples=150, deadline=None)
    def test_idempotent(self, language, word):
        once = stem([word], language)
        assert stem(once, language) == once


def toy_corpus():
    return Corpus(
        tweets=[
            Tweet("t1", "Check #Hate http://x.co 123 !!", EN, Label.HATEFUL),
            Tweet("t2", "the dogs were hating it", EN, Label.NOT_HATEFUL),
            Tweet("t3", "a an of", EN, Label.NOT_HATEFUL),  # all stopwords
            Tweet("t4", "odiando a los perros", ES, Label.HATEFUL),
        ]
    )


class TestPreprocessCorpus:
    def test_stage_counts_match_recount(self):
        processed = preprocess_corpus(toy_corpus())
        # independent recount
        stopwords = default_stopwords()
        rules = default_stem_rules()
        d2_total = d3_total = d4_total = 0
        for tweet in toy_corpus():
            d2 = oracle_clean(tweet.text).split()
            d3 = [
                t
                for t in d2
                if t not in stopwords.stopwords(tweet.language) and len(t) >= 3
            ]
            d4 = [oracle_stem(t, rules.rules(tweet.language)) for t in d3]
            d2_total += len(d2)
            d3_total += len(d3)
            d4_total += len(d4)
        assert processed.report.input_token_count == d2_total
        assert processed.report.after_stopword_count == d3_total
        assert processed.report.after_stem_count == d4_total

    def test_all_stopword_tweet_flagged(self):
        processed = preprocess_corpus(toy_corpus())
        assert "t3" in processed.report.emptied_tweet_ids
        kept = {t.tweet_id: t for t in processed}
        assert kept["t3"].tokens == ()
        assert kept["t3"].text == ""

    def test_fixpoint_on_clean_tweet(self):
        corpus = Corpus(tweets=[Tweet("t1", "dog bite man", EN, Label.HATEFUL)])
        processed = preprocess_corpus(corpus)
        assert processed.tweets[0].tokens == ("dog", "bite", "man")

    def test_idempotent_end_to_end(self):
        first = preprocess_corpus(toy_corpus())
        rebuilt = Corpus(
            tweets=[
                Tweet(t.tweet_id, t.text or "placeholder", t.language, t.label)
                for t in first
                if t.text
            ]
        )
        second = preprocess_corpus(rebuilt)
        for a, b in zip((t for t in first if t.text), second):
            assert a.tokens == b.tokens

    def test_no_stage_increases_token_count(self):
        processed = preprocess_corpus(toy_corpus())
        report = processed.report
        assert report.input_token_count >= report.after_stopword_count
        assert report.after_stopword_count == report.after_stem_count  # stem is 1:1

    def test_labels_and_ids_untouched(self):
        processed = preprocess_corpus(toy_corpus())
        assert [(t.tweet_id, t.label) for t in processed] == [
            (t.id, t.label) for t in toy_corpus()
        ]

    def test_d4_invariants(self):
        processed = preprocess_corpus(toy_corpus())
        for tweet in processed:
            for token in tweet.tokens:
                assert len(token) >= 3
                assert not any(ch.isdigit() for ch in token)
                assert not any(unicodedata.category(ch)[0] == "P" for ch in token)

    def test_round_trip_jsonl(self, tmp_path):
        processed = preprocess_corpus(toy_corpus())
        path = tmp_path / "p.jsonl"
        save_processed(processed, path)
        again = load_processed(path)
        assert [(t.tweet_id, t.tokens, t.label) for t in processed] == [
            (t.tweet_id, t.tokens, t.label) for t in again
        ]


class TestStemRuleLoader:
    def test_rejects_growing_replacement(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("suffix,replacement,min_stem_len\na,aaa,1\n", encoding="utf-8")
        with pytest.raises(DataError):
            load_stem_rules({EN: path})

    def test_rejects_identity_rule(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("suffix,replacement,min_stem_len\ning,ing,1\n", encoding="utf-8")
        with pytest.raises(DataError):
            load_stem_rules({EN: path})
