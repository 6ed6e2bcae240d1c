"""Command-line entry point wiring every pipeline stage.

Exit codes: 0 success, 1 usage/config, 2 data error, 3 provider error.
Every subcommand reads its declared inputs, writes into the configured
output directory only, and is byte-deterministic given identical inputs
and seeds (no timestamps in artifacts).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .annotation.service import create_app
from .annotation.store import AnnotationStore
from .annotation.agreement import agreement_pipeline
from .classifiers.experiment import run_experiment
from .classifiers.llm import ScriptedLlmProvider, HttpLlmProvider, LlmConfig
from .config import RunConfig, load_config
from .corpus import Corpus, Language, corpus_stats, load_corpus, save_corpus, stratified_split
from .errors import ConfigError, DataError, ProviderError, TrihateError
from .evaluation import Report, RunRecord, confusion, macro_metrics
from .features.fasttext import build_ngram_table, save_ngram_table
from .features.glove import build_cooccurrence, glove_train
from .features.tfidf import IdfMode, build_vocabulary, tfidf_matrix
from .predictions import load_predictions
from .preprocess import (
    default_stem_rules,
    default_stopwords,
    load_processed,
    load_stem_rules,
    load_stopwords,
    preprocess_corpus,
    save_processed,
)
from .toydata import generate_toy_dataset
from .translation import (
    HttpTranslationProvider,
    PhraseTableProvider,
    TranslationCache,
    build_unified_corpora,
    load_glossary,
    translate_tweet,
    validate_translations,
)


def _load_run_config(config_path: Optional[str], out: Optional[str] = None) -> RunConfig:
    if not config_path:
        raise ConfigError("--config is required for this command")
    config = load_config(config_path)
    if out:
        config.output_dir = Path(out)
    return config


def _tables(config: RunConfig):
    stopwords = load_stopwords(config.stopwords) if config.stopwords else default_stopwords()
    stem_rules = load_stem_rules(config.stem_rules) if config.stem_rules else default_stem_rules()
    return stopwords, stem_rules


def _provider(config: RunConfig, override: Optional[str]):
    kind = override or config.translation.get("provider", "mock")
    if kind == "mock":
        if not config.phrase_table:
            raise ConfigError("mock translation provider requires paths.phrase_table")
        return PhraseTableProvider.from_csv(config.phrase_table)
    if kind == "live":
        endpoint = config.translation.get("endpoint", "")
        if not endpoint:
            raise ConfigError("live translation provider requires translation.endpoint")
        return HttpTranslationProvider(
            endpoint,
            api_key_env=config.translation.get("api_key_env", "TRANSLATE_API_KEY"),
            min_interval=float(config.translation.get("min_interval", 0.0)),
            max_retries=int(config.translation.get("max_retries", 3)),
        )
    raise ConfigError(f"unknown translation provider {kind!r} (expected mock or live)")


def _llm_provider(config: RunConfig, override: Optional[str]):
    kind = override or "mock"
    if kind == "mock":
        if not config.llm_script:
            raise ConfigError("mock llm provider requires paths.llm_script")
        return ScriptedLlmProvider.from_file(config.llm_script)
    if kind == "live":
        endpoint = config.llm.get("endpoint", "")
        if not endpoint:
            raise ConfigError("live llm provider requires llm.endpoint")
        llm_spec = config.classifiers.get("llm", {})
        return HttpLlmProvider(
            LlmConfig(endpoint=endpoint, model=llm_spec.get("model", "gpt-3.5-turbo")),
            api_key_env=config.llm.get("api_key_env", "LLM_API_KEY"),
        )
    raise ConfigError(f"unknown llm provider {kind!r} (expected mock or live)")


@click.group()
def cli():
    """Trilingual hate-speech detection pipeline."""


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def ingest(config_path, out):
    """Validate the configured corpora and write normalized copies."""
    config = _load_run_config(config_path, out)
    out = config.output_dir / "ingested"
    for language, path in sorted(config.corpora.items(), key=lambda kv: kv[0].value):
        corpus = load_corpus(path, expected_language=language)
        save_corpus(corpus, out / f"{language.value.lower()}.csv")
        click.echo(f"{language.value}: {len(corpus)} tweets ok")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, default=None, help="Single corpus instead of configured set.")
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def stats(config_path, corpus_path, out):
    """Corpus statistics as a table (stdout) and JSON (output dir)."""
    config = _load_run_config(config_path, out)
    if corpus_path:
        corpora = [load_corpus(corpus_path)]
    else:
        corpora = [load_corpus(p) for _, p in sorted(config.corpora.items(), key=lambda kv: kv[0].value)]
    merged = Corpus(tweets=[t for c in corpora for t in c], provenance="stats")
    result = corpus_stats(merged)
    click.echo(result.format_table())
    out = config.output_dir / "stats.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, required=True)
@click.option("--seed", type=int, default=None, help="Overrides the config seed.")
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def split(config_path, corpus_path, seed, out):
    """Stratified train/test split of one labeled corpus."""
    config = _load_run_config(config_path, out)
    corpus = load_corpus(corpus_path)
    train, test = stratified_split(corpus, config.split_fraction, seed if seed is not None else config.seed)
    stem = Path(corpus_path).stem
    save_corpus(train, config.output_dir / f"{stem}.train.csv")
    save_corpus(test, config.output_dir / f"{stem}.test.csv")
    click.echo(f"train {len(train)} / test {len(test)}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, required=True)
@click.option("--target", type=str, required=True, help="Target language name.")
@click.option("--provider", "provider_kind", type=click.Choice(["mock", "live"]), default=None)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def translate(config_path, corpus_path, target, provider_kind, out):
    """Translate one corpus into the target language."""
    config = _load_run_config(config_path, out)
    corpus = load_corpus(corpus_path)
    target_language = Language.parse(target)
    provider = _provider(config, provider_kind)
    glossary = load_glossary(config.glossary) if config.glossary else None
    cache = TranslationCache(config.output_dir / "translation_cache.json")
    translated = []
    for tweet in corpus:
        result = translate_tweet(tweet, target_language, provider, glossary, cache)
        translated.append(result)
    cache.save()
    out = config.output_dir / f"{Path(corpus_path).stem}.{target_language.value.lower()}.csv"
    from .corpus import Tweet

    save_corpus(
        Corpus(
            tweets=[
                Tweet(id=t.original.id, text=t.translated_text, language=target_language, label=t.original.label)
                for t in translated
            ],
            provenance=f"translated-{target_language.value.lower()}",
        ),
        out,
    )
    if glossary:
        report = validate_translations(translated, glossary)
        click.echo(f"validated {report.checked} pairs, {len(report.flagged)} flagged")
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--provider", "provider_kind", type=click.Choice(["mock", "live"]), default=None)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def align(config_path, provider_kind, out):
    """Build the unified per-language corpora and the joint corpus."""
    config = _load_run_config(config_path, out)
    for language in (Language.ENGLISH, Language.URDU, Language.SPANISH):
        if language not in config.corpora:
            raise ConfigError(f"align requires paths.corpora.{language.value.lower()}")
    provider = _provider(config, provider_kind)
    glossary = load_glossary(config.glossary) if config.glossary else None
    cache = TranslationCache(config.output_dir / "translation_cache.json")
    unified = build_unified_corpora(
        load_corpus(config.corpora[Language.ENGLISH], Language.ENGLISH),
        load_corpus(config.corpora[Language.URDU], Language.URDU),
        load_corpus(config.corpora[Language.SPANISH], Language.SPANISH),
        provider,
        glossary,
        cache,
        parallelism=int(config.translation.get("parallelism", 1)),
    )
    out_dir = config.output_dir
    save_corpus(unified.combined_english, out_dir / "combined_english.csv")
    save_corpus(unified.combined_urdu, out_dir / "combined_urdu.csv")
    save_corpus(unified.combined_spanish, out_dir / "combined_spanish.csv")
    save_corpus(unified.joint, out_dir / "joint.csv")
    if unified.validation is not None:
        validation_path = out_dir / "translation_validation.json"
        validation_path.write_text(
            json.dumps(
                {"checked": unified.validation.checked, "flagged": unified.validation.flagged},
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        click.echo(f"validated {unified.validation.checked} pairs, {len(unified.validation.flagged)} flagged")
    click.echo(
        f"combined sizes: en={len(unified.combined_english)} ur={len(unified.combined_urdu)} "
        f"es={len(unified.combined_spanish)} joint={len(unified.joint)}"
    )


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, required=True)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def preprocess(config_path, corpus_path, out):
    """Clean, tokenize, filter and stem one corpus; write JSONL + report."""
    config = _load_run_config(config_path, out)
    stopwords, stem_rules = _tables(config)
    corpus = load_corpus(corpus_path)
    processed = preprocess_corpus(
        corpus,
        stopwords,
        stem_rules,
        min_token_len=config.min_token_len,
        length_filter_disabled=config.length_filter_disabled,
    )
    stem = Path(corpus_path).stem
    out = config.output_dir / f"{stem}.processed.jsonl"
    save_processed(processed, out)
    report_path = config.output_dir / f"{stem}.preprocess_report.json"
    report_path.write_text(
        json.dumps(
            {
                "input_token_count": processed.report.input_token_count,
                "after_stopword_count": processed.report.after_stopword_count,
                "after_stem_count": processed.report.after_stem_count,
                "emptied_tweets": processed.report.emptied_tweet_ids,
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    click.echo(
        f"tokens {processed.report.input_token_count} -> {processed.report.after_stopword_count} "
        f"-> {processed.report.after_stem_count}; {len(processed.report.emptied_tweet_ids)} emptied"
    )
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--processed", "processed_path", type=str, required=True)
@click.option("--method", type=click.Choice(["tfidf", "glove", "fasttext"]), default="tfidf")
@click.option("--idf-mode", type=click.Choice(["literal", "log"]), default=None)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def featurize(config_path, processed_path, method, idf_mode, out):
    """Turn a processed corpus into numeric features or embeddings."""
    config = _load_run_config(config_path, out)
    processed = load_processed(processed_path)
    documents = [list(t.tokens) for t in processed]
    stem = Path(processed_path).stem.replace(".processed", "")
    out = config.output_dir
    if method == "tfidf":
        vocab = build_vocabulary(documents)
        mode = IdfMode(idf_mode or config.idf_mode)
        matrix = tfidf_matrix(documents, [t.tweet_id for t in processed], vocab, mode)
        matrix.export_triplets(out / f"{stem}.tfidf.csv")
        vocab_path = out / f"{stem}.vocab.txt"
        vocab_path.write_text("\n".join(vocab.tokens) + "\n", encoding="utf-8")
        click.echo(f"tfidf matrix {matrix.shape[0]}x{matrix.shape[1]} -> {out / f'{stem}.tfidf.csv'}")
    elif method == "glove":
        cooc = build_cooccurrence(documents, window=5)
        params, costs = glove_train(cooc, dim=16, epochs=30, seed=config.seed)
        path = out / f"{stem}.glove.txt"
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"{params.word_vectors.shape[1]} {len(cooc.vocabulary)} 0 0 0 {config.seed}\n")
            for token in cooc.vocabulary.tokens:
                vec = params.embedding(cooc.vocabulary.index[token])
                fh.write(f"word:{token} " + " ".join(f"{x:.17g}" for x in vec) + "\n")
        click.echo(f"glove cost {costs[0]:.4f} -> {costs[-1]:.4f}; wrote {path}")
    else:
        vocab = build_vocabulary(documents)
        table = build_ngram_table(vocab.tokens, dim=32, seed=config.seed)
        path = out / f"{stem}.fasttext.txt"
        save_ngram_table(table, path)
        click.echo(f"fasttext table ({table.buckets} buckets, {len(table.word_vectors)} words) -> {path}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, required=True)
@click.option("--model", type=click.Choice(["svm", "attention"]), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--idf-mode", type=click.Choice(["literal", "log"]), default=None)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def train(config_path, corpus_path, model, seed, idf_mode, out):
    """Train a classifier on the train split and predict the test split."""
    config = _load_run_config(config_path, out)
    stopwords, stem_rules = _tables(config)
    corpus = load_corpus(corpus_path)
    spec = dict(config.classifiers.get(model, {}))
    spec["type"] = model
    if model == "svm":
        spec["idf_mode"] = idf_mode or config.idf_mode
    if model == "attention":
        spec.update(config.attention)
    result = run_experiment(
        corpus,
        spec,
        test_fraction=config.split_fraction,
        seed=seed if seed is not None else config.seed,
        stopwords=stopwords,
        stem_rules=stem_rules,
    )
    stem = f"{model}-{Path(corpus_path).stem}"
    pred_path, meta_path = result.persist(config.output_dir, stem)
    click.echo(f"wrote {pred_path} and {meta_path}")


@cli.command("classify-llm")
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, required=True)
@click.option("--provider", "provider_kind", type=click.Choice(["mock", "live"]), default="mock")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def classify_llm(config_path, corpus_path, provider_kind, seed, out):
    """Few-shot LLM classification of the test split."""
    config = _load_run_config(config_path, out)
    corpus = load_corpus(corpus_path)
    spec = dict(config.classifiers.get("llm", {}))
    spec["type"] = "llm"
    provider = _llm_provider(config, provider_kind)
    result = run_experiment(
        corpus,
        spec,
        test_fraction=config.split_fraction,
        seed=seed if seed is not None else config.seed,
        llm_provider=provider,
    )
    stem = f"llm-{Path(corpus_path).stem}"
    pred_path, meta_path = result.persist(config.output_dir, stem)
    click.echo(f"abstains: {len(result.abstained_ids)}")
    click.echo(f"wrote {pred_path} and {meta_path}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--predictions", "pred_path", type=str, required=True)
@click.option("--gold", "gold_path", type=str, required=True)
@click.option("--name", type=str, default="run")
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def evaluate(config_path, pred_path, gold_path, name, out):
    """Confusion matrix and macro metrics for one prediction file."""
    config = _load_run_config(config_path, out)
    predictions = load_predictions(pred_path)
    gold_corpus = load_corpus(gold_path)
    gold = {t.id: t.label for t in gold_corpus if t.label is not None}
    cm, abstains = confusion(predictions, gold)
    metrics = macro_metrics(cm, abstains)
    out = config.output_dir / f"{name}.metrics.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    payload = metrics.to_dict()
    payload["confusion"] = {"tn": cm.tn, "fp": cm.fp, "fn": cm.fn, "tp": cm.tp}
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(
        f"{name}: P={metrics.macro_precision:.2f} R={metrics.macro_recall:.2f} "
        f"F1={metrics.macro_f1:.2f} acc={metrics.accuracy:.2f} abstain={abstains}"
    )
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option(
    "--run",
    "runs",
    type=str,
    multiple=True,
    required=True,
    help="name=PREDICTIONS:GOLD[:baseline_f1], repeatable.",
)
@click.option("--format", "human_format", type=click.Choice(["text", "markdown"]), default="text")
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def report(config_path, runs, human_format, out):
    """Aggregate runs into a metrics/confusion/improvement report."""
    config = _load_run_config(config_path, out)
    records = []
    for spec in runs:
        if "=" not in spec:
            raise ConfigError(f"bad --run value {spec!r}, expected name=PREDICTIONS:GOLD[:baseline]")
        name, rest = spec.split("=", 1)
        parts = rest.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(f"bad --run value {spec!r}, expected name=PREDICTIONS:GOLD[:baseline]")
        predictions = load_predictions(parts[0])
        gold_corpus = load_corpus(parts[1])
        gold = {t.id: t.label for t in gold_corpus if t.label is not None}
        cm, abstains = confusion(predictions, gold)
        baseline = float(parts[2]) if len(parts) == 3 else None
        records.append(RunRecord(name=name, cm=cm, baseline_f1=baseline, abstain_count=abstains))
    machine, human = Report(runs=records).write(config.output_dir, human_format=human_format)
    click.echo(human.read_text(encoding="utf-8"))
    click.echo(f"wrote {machine} and {human}")


@cli.command()
@click.option("--config", "config_path", type=str, required=True)
@click.option("--store", "store_path", type=str, default=None, help="Annotation store JSONL.")
@click.option("--n", "annotators", type=int, default=None, help="Annotators per item.")
@click.option("--out", type=str, default=None, help="Overrides the configured output directory.")
def kappa(config_path, store_path, annotators, out):
    """Fleiss' Kappa over the annotation store."""
    config = _load_run_config(config_path, out)
    store_path = store_path or config.annotation.get("store")
    if not store_path:
        raise ConfigError("kappa requires --store or annotation.store in config")
    n = annotators or int(config.annotation.get("annotators_per_item", 3))
    store = AnnotationStore(store_path)
    records = store.snapshot()
    if not records:
        raise DataError(f"annotation store {store_path} is empty")
    result = agreement_pipeline(records, n)
    out = config.output_dir / "agreement.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    payload = result.report.to_dict()
    payload["ties"] = sum(1 for o in result.outcomes if o.tie)
    payload["excluded_tweets"] = result.excluded_tweets
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(
        f"kappa={result.report.kappa:.4f} ({result.report.interpretation.value}), "
        f"items={result.report.item_count}, ties={payload['ties']}"
    )
    click.echo(f"wrote {out}")


@cli.command("annotate-serve")
@click.option("--config", "config_path", type=str, required=True)
@click.option("--corpus", "corpus_path", type=str, default=None)
@click.option("--host", type=str, default=None)
@click.option("--port", type=int, default=None)
def annotate_serve(config_path, corpus_path, host, port):
    """Serve the annotation API plus the built UI assets."""
    import uvicorn

    config = _load_run_config(config_path, out)
    if corpus_path is None:
        if Language.ENGLISH not in config.corpora:
            raise ConfigError("annotate-serve requires --corpus or paths.corpora.english")
        corpus_path = str(config.corpora[Language.ENGLISH])
    corpus = load_corpus(corpus_path)
    store = AnnotationStore(config.annotation.get("store", config.output_dir / "annotations.jsonl"))
    ui_assets = config.annotation.get("ui_assets")
    if ui_assets and not Path(ui_assets).is_dir():
        raise ConfigError(f"annotation.ui_assets is not a directory: {ui_assets}")
    app = create_app(
        corpus,
        store,
        annotators_per_item=int(config.annotation.get("annotators_per_item", 3)),
        static_dir=ui_assets,
    )
    uvicorn.run(
        app,
        host=host or config.annotation.get("host", "127.0.0.1"),
        port=port or int(config.annotation.get("port", 8765)),
        log_level="warning",
    )


@cli.command("gen-toy")
@click.option("--out", "out_dir", type=str, default="toy")
@click.option("--seed", type=int, default=7)
def gen_toy(out_dir, seed):
    """Generate the deterministic toy corpus, phrase tables and glossary."""
    paths = generate_toy_dataset(out_dir, seed=seed)
    for name in sorted(paths):
        click.echo(f"wrote {paths[name]}")


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: usage: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        click.echo(f"error: usage: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except ConfigError as exc:
        for problem in exc.problems:
            click.echo(f"error: config: {problem}", err=True)
        sys.exit(1)
    except ProviderError as exc:
        click.echo(f"error: provider: {exc}", err=True)
        sys.exit(3)
    except DataError as exc:
        click.echo(f"error: data: {exc}", err=True)
        sys.exit(2)
    except TrihateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
