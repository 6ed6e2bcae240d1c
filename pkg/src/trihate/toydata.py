"""Deterministic desk-scale fixtures: trilingual corpus, phrase tables,
glossary and a mock LLM script.

Tweets are built from sentence units that exist in all three languages, so
the bundled phrase table covers every tweet in every translation direction
(sentence-level entries plus word-level tails). Two units deliberately
carry slurs whose sentence-level mock translation softens them to "jerk",
exercising the glossary-restoration path end to end.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Label, Language, Tweet, save_corpus

EN, UR, ES = Language.ENGLISH, Language.URDU, Language.SPANISH


@dataclass(frozen=True)
class ParallelUnit:
    english: str
    urdu: str
    spanish: str
    label: Label

    def text(self, language: Language) -> str:
        return {EN: self.english, UR: self.urdu, ES: self.spanish}[language]


UNITS = [
    ParallelUnit("you are a stupid dog", "تم ایک بیوقوف کتے ہو", "eres un perro estúpido", Label.HATEFUL),
    ParallelUnit(
        "these people are trash and should leave",
        "یہ لوگ کچرا ہیں اور چلے جائیں",
        "esta gente es basura y debería irse",
        Label.HATEFUL,
    ),
    ParallelUnit("shut up you worthless idiot", "چپ کرو بیکار احمق", "cállate idiota inútil", Label.HATEFUL),
    ParallelUnit("I hate those morons so much", "مجھے ان احمقوں سے نفرت ہے", "odio tanto a esos imbéciles", Label.HATEFUL),
    ParallelUnit("they are animals not humans", "وہ جانور ہیں انسان نہیں", "son animales no humanos", Label.HATEFUL),
    ParallelUnit(
        "that guy is a jerk honestly",
        "وہ بندہ کمینہ ہے سچ میں",
        "ese tipo es un hijo de puta en serio",
        Label.HATEFUL,
    ),
    ParallelUnit("you jerk stop ruining everything", "تم بہنچود سب برباد کر رہے ہو", "cabrón deja de arruinar todo", Label.HATEFUL),
    ParallelUnit("hope everyone has a good day", "امید ہے سب کا دن اچھا ہو", "espero que todos tengan un buen día", Label.NOT_HATEFUL),
    ParallelUnit("thanks for the support my friends", "دوستو حمایت کا شکریہ", "gracias por el apoyo amigos", Label.NOT_HATEFUL),
    ParallelUnit("life is hard but we keep going", "زندگی مشکل ہے مگر ہم چلتے ہیں", "la vida es dura pero seguimos", Label.NOT_HATEFUL),
    ParallelUnit("the weather is lovely today", "آج موسم بہت اچھا ہے", "el clima está hermoso hoy", Label.NOT_HATEFUL),
    ParallelUnit("congratulations on winning the match", "میچ جیتنے پر مبارک ہو", "felicidades por ganar el partido", Label.NOT_HATEFUL),
    ParallelUnit("I feel sad about the war news", "جنگ کی خبروں سے دل اداس ہے", "me entristecen las noticias de la guerra", Label.NOT_HATEFUL),
    ParallelUnit("we should help each other more", "ہمیں ایک دوسرے کی مدد کرنی چاہیے", "deberíamos ayudarnos más", Label.NOT_HATEFUL),
]

TAILS = [
    ("today", "آج", "hoy"),
    ("friend", "دوست", "amigo"),
    ("really", "واقعی", "realmente"),
    ("everyone", "سب", "todos"),
    ("now", "ابھی", "ahora"),
]

# The mock table renders both heavy slurs as "jerk", mirroring how public
# translators soften intensity; the glossary below restores it.
TERM_ENTRIES = [
    (ES, EN, "hijo de puta", "jerk"),
    (UR, EN, "بہنچود", "jerk"),
]

GLOSSARY_ROWS = [
    ("Spanish>English", "hijo de puta", "son of a bitch", "intensity softened by providers"),
    ("Urdu>English", "بہنچود", "motherfucker", "intensity softened by providers"),
]

HATEFUL_KEYWORDS = [
    "stupid", "trash", "idiot", "hate", "moron", "animals", "jerk", "worthless",
    "hijo de puta", "cabrón", "perro", "basura", "idiota", "imbéciles", "odio", "animales", "estúpido",
    "بیوقوف", "کچرا", "احمق", "نفرت", "جانور", "کمینہ", "بہنچود", "کتے", "برباد",
]

TWEETS_PER_LANGUAGE = 20


def generate_toy_corpora(seed: int = 7) -> dict[Language, Corpus]:
    """20 tweets per language, half per label, deterministic for a seed."""
    rng = random.Random(seed)
    corpora: dict[Language, Corpus] = {}
    hateful = [u for u in UNITS if u.label is Label.HATEFUL]
    neutral = [u for u in UNITS if u.label is Label.NOT_HATEFUL]
    for language, code in ((EN, "en"), (UR, "ur"), (ES, "es")):
        tweets = []
        per_label = TWEETS_PER_LANGUAGE // 2
        for i in range(per_label * 2):
            pool = hateful if i < per_label else neutral
            unit = pool[i % len(pool)]
            text = unit.text(language)
            if rng.random() < 0.5:
                tail = rng.choice(TAILS)
                text = f"{text} {tail[{EN: 0, UR: 1, ES: 2}[language]]}"
            tweets.append(Tweet(id=f"{code}-{i + 1:03d}", text=text, language=language, label=unit.label))
        corpora[language] = Corpus(tweets=tweets, provenance=f"toy-{code}")
    return corpora


def write_phrase_table(path: Path) -> None:
    directions = [(EN, UR), (EN, ES), (UR, EN), (UR, ES), (ES, EN), (ES, UR)]
    rows = []
    for unit in UNITS:
        for source, target in directions:
            rows.append((source.value, target.value, unit.text(source), unit.text(target)))
    for en_word, ur_word, es_word in TAILS:
        words = {EN: en_word, UR: ur_word, ES: es_word}
        for source, target in directions:
            rows.append((source.value, target.value, words[source], words[target]))
    for source, target, phrase, rendering in TERM_ENTRIES:
        rows.append((source.value, target.value, phrase, rendering))
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source_lang", "target_lang", "source_phrase", "target_phrase"])
        writer.writerows(rows)


def write_glossary(path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lang", "term", "required_rendering", "note"])
        writer.writerows(GLOSSARY_ROWS)


def write_llm_script(path: Path) -> None:
    script = {"mode": "keyword", "hateful_terms": HATEFUL_KEYWORDS, "default": "Not-Hateful"}
    path.write_text(json.dumps(script, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def write_toy_config(out_dir: Path, seed: int) -> Path:
    config = f"""\
version: 1
seed: {seed}
split_fraction: 0.2
paths:
  corpora:
    english: {out_dir}/english.csv
    urdu: {out_dir}/urdu.csv
    spanish: {out_dir}/spanish.csv
  phrase_table: {out_dir}/phrase_table.csv
  glossary: {out_dir}/glossary.csv
  llm_script: {out_dir}/llm_script.json
  output_dir: {out_dir}/out
features:
  idf_mode: literal
attention:
  heads: 2
  d_k: 8
  d_v: 8
  d_model: 16
  n_max: 16
classifiers:
  svm:
    C: 1.0
    epochs: 150
    learning_rate: 0.1
  attention:
    epochs: 12
    learning_rate: 0.1
    batch_size: 8
  llm:
    shots_per_class: 3
    model: mock
translation:
  provider: mock
  endpoint: ""
  api_key_env: TRANSLATE_API_KEY
  parallelism: 1
llm:
  endpoint: ""
  api_key_env: LLM_API_KEY
annotation:
  annotators_per_item: 3
  store: {out_dir}/out/annotations.jsonl
  host: 127.0.0.1
  port: 8765
  ui_assets: null
"""
    path = out_dir / "config.yaml"
    path.write_text(config, encoding="utf-8")
    return path


def generate_toy_dataset(out_dir: str | Path, seed: int = 7) -> dict[str, Path]:
    """Write the full toy fixture set; returns the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpora = generate_toy_corpora(seed)
    paths = {}
    for language, filename in ((EN, "english.csv"), (UR, "urdu.csv"), (ES, "spanish.csv")):
        path = out_dir / filename
        save_corpus(corpora[language], path)
        paths[filename] = path
    write_phrase_table(out_dir / "phrase_table.csv")
    write_glossary(out_dir / "glossary.csv")
    write_llm_script(out_dir / "llm_script.json")
    paths["phrase_table.csv"] = out_dir / "phrase_table.csv"
    paths["glossary.csv"] = out_dir / "glossary.csv"
    paths["llm_script.json"] = out_dir / "llm_script.json"
    paths["config.yaml"] = write_toy_config(out_dir, seed)
    return paths
