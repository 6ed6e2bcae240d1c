"""Run configuration: one versioned YAML file, env-var interpolation for
secrets, validation that reports every problem at once."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .corpus import Language
from .errors import ConfigError

ENV_RE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")


def _interpolate(value: Any) -> Any:
    if isinstance(value, str):
        return ENV_RE.sub(lambda m: os.environ.get(m.group(1), ""), value)
    if isinstance(value, dict):
        return {k: _interpolate(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_interpolate(v) for v in value]
    return value


@dataclass
class RunConfig:
    seed: int = 0
    split_fraction: float = 0.2
    corpora: dict[Language, Path] = field(default_factory=dict)
    stopwords: Optional[dict[Language, Path]] = None
    stem_rules: Optional[dict[Language, Path]] = None
    phrase_table: Optional[Path] = None
    glossary: Optional[Path] = None
    llm_script: Optional[Path] = None
    output_dir: Path = Path("out")
    idf_mode: str = "literal"
    min_token_len: int = 3
    length_filter_disabled: frozenset[Language] = frozenset()
    attention: dict = field(default_factory=dict)
    classifiers: dict = field(default_factory=dict)
    translation: dict = field(default_factory=dict)
    llm: dict = field(default_factory=dict)
    annotation: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _lang_paths(section: Optional[dict], problems: list[str], name: str) -> Optional[dict[Language, Path]]:
    if section is None:
        return None
    out: dict[Language, Path] = {}
    for key, value in section.items():
        try:
            out[Language.parse(key)] = Path(value)
        except Exception:
            problems.append(f"{name}: unknown language key {key!r}")
    return out


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate; raises ConfigError listing every problem found."""
    path = Path(path)
    problems: list[str] = []
    if not path.exists():
        raise ConfigError([f"config file not found: {path}"])
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError([f"config is not valid YAML: {exc}"])
    raw = _interpolate(raw)
    if raw.get("version") != 1:
        problems.append(f"unsupported config version {raw.get('version')!r} (expected 1)")

    paths = raw.get("paths", {}) or {}
    corpora = _lang_paths(paths.get("corpora", {}), problems, "paths.corpora") or {}
    stopwords = _lang_paths(paths.get("stopwords"), problems, "paths.stopwords")
    stem_rules = _lang_paths(paths.get("stem_rules"), problems, "paths.stem_rules")

    preprocess_section = raw.get("preprocess", {}) or {}
    disabled: set[Language] = set()
    for key in preprocess_section.get("length_filter_disabled", []) or []:
        try:
            disabled.add(Language.parse(key))
        except Exception:
            problems.append(f"preprocess.length_filter_disabled: unknown language {key!r}")

    config = RunConfig(
        seed=int(raw.get("seed", 0)),
        split_fraction=float(raw.get("split_fraction", 0.2)),
        corpora=corpora,
        stopwords=stopwords,
        stem_rules=stem_rules,
        phrase_table=Path(paths["phrase_table"]) if paths.get("phrase_table") else None,
        glossary=Path(paths["glossary"]) if paths.get("glossary") else None,
        llm_script=Path(paths["llm_script"]) if paths.get("llm_script") else None,
        output_dir=Path(paths.get("output_dir", "out")),
        idf_mode=(raw.get("features", {}) or {}).get("idf_mode", "literal"),
        min_token_len=int(preprocess_section.get("min_token_len", 3)),
        length_filter_disabled=frozenset(disabled),
        attention=raw.get("attention", {}) or {},
        classifiers=raw.get("classifiers", {}) or {},
        translation=raw.get("translation", {}) or {},
        llm=raw.get("llm", {}) or {},
        annotation=raw.get("annotation", {}) or {},
        raw=raw,
    )

    if not 0.0 < config.split_fraction < 1.0:
        problems.append(f"split_fraction must be in (0, 1), got {config.split_fraction}")
    if config.idf_mode not in ("literal", "log"):
        problems.append(f"features.idf_mode must be 'literal' or 'log', got {config.idf_mode!r}")
    for language, corpus_path in config.corpora.items():
        if not corpus_path.exists():
            problems.append(f"paths.corpora.{language.value.lower()}: file not found: {corpus_path}")
    for section_name, section in (("stopwords", config.stopwords), ("stem_rules", config.stem_rules)):
        if section:
            for language, p in section.items():
                if not p.exists():
                    problems.append(f"paths.{section_name}.{language.value.lower()}: file not found: {p}")
    for name in ("phrase_table", "glossary", "llm_script"):
        p = getattr(config, name)
        if p is not None and not p.exists():
            problems.append(f"paths.{name}: file not found: {p}")

    if problems:
        raise ConfigError(problems)
    return config
