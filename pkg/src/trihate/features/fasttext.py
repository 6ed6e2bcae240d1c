"""Compositional subword embeddings: a word is the sum of its n-gram vectors.

N-gram vectors live in a fixed bucket table addressed by FNV-1a hashing, so
never-seen words still compose to a finite vector. Whole words present in
the table contribute their own vector on top.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DataError

FNV_OFFSET = 0x811C9DC5
FNV_PRIME = 0x01000193


def fnv1a(data: str) -> int:
    """Stable 32-bit FNV-1a over UTF-8 bytes (Python's hash() is salted)."""
    h = FNV_OFFSET
    for byte in data.encode("utf-8"):
        h = ((h ^ byte) * FNV_PRIME) & 0xFFFFFFFF
    return h


def word_ngrams(word: str, n_min: int = 3, n_max: int = 5) -> list[str]:
    """Sorted set of character n-grams of the boundary-marked word."""
    marked = f"<{word}>"
    grams = {
        marked[i : i + n]
        for n in range(n_min, n_max + 1)
        for i in range(len(marked) - n + 1)
    }
    grams.discard(marked)  # the whole marked word is handled separately
    return sorted(grams)


@dataclass
class NgramTable:
    dim: int
    n_min: int = 3
    n_max: int = 5
    buckets: int = 4096
    seed: int = 0
    bucket_vectors: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    word_vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def ngram_vector(self, gram: str) -> np.ndarray:
        return self.bucket_vectors[fnv1a(gram) % self.buckets]


def build_ngram_table(
    words: list[str],
    dim: int = 100,
    n_min: int = 3,
    n_max: int = 5,
    buckets: int = 4096,
    seed: int = 0,
) -> NgramTable:
    """Seed-deterministic table: bucket vectors plus one vector per word."""
    if n_min < 1 or n_max < n_min:
        raise DataError(f"bad n-gram range [{n_min}, {n_max}]")
    rng = np.random.default_rng(seed)
    scale = 1.0 / dim
    table = NgramTable(
        dim=dim,
        n_min=n_min,
        n_max=n_max,
        buckets=buckets,
        seed=seed,
        bucket_vectors=rng.uniform(-scale, scale, size=(buckets, dim)),
    )
    for word in words:
        table.word_vectors[word] = rng.uniform(-scale, scale, size=dim)
    return table


def fasttext_embed(word: str, table: NgramTable) -> np.ndarray:
    """Sum of the word's n-gram vectors, plus its whole-word vector if any."""
    vec = np.zeros(table.dim)
    for gram in word_ngrams(word, table.n_min, table.n_max):
        vec += table.ngram_vector(gram)
    if word in table.word_vectors:
        vec = vec + table.word_vectors[word]
    return vec


def save_ngram_table(table: NgramTable, path: str | Path) -> None:
    """Golden text format: header then one record per key."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        count = table.buckets + len(table.word_vectors)
        fh.write(f"{table.dim} {count} {table.n_min} {table.n_max} {table.buckets} {table.seed}\n")
        for i in range(table.buckets):
            floats = " ".join(f"{x:.17g}" for x in table.bucket_vectors[i])
            fh.write(f"bucket:{i} {floats}\n")
        for word in sorted(table.word_vectors):
            floats = " ".join(f"{x:.17g}" for x in table.word_vectors[word])
            fh.write(f"word:{word} {floats}\n")


def load_ngram_table(path: str | Path) -> NgramTable:
    path = Path(path)
    if not path.exists():
        raise DataError(f"embedding table not found: {path}")
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 6:
            raise DataError(f"{path}: bad embedding header")
        dim, count, n_min, n_max, buckets, seed = (int(x) for x in header)
        table = NgramTable(
            dim=dim, n_min=n_min, n_max=n_max, buckets=buckets, seed=seed,
            bucket_vectors=np.zeros((buckets, dim)),
        )
        seen = 0
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            key, floats = parts[0], np.array([float(x) for x in parts[1:]])
            if floats.shape != (dim,):
                raise DataError(f"{path}: record {key!r} has {len(floats)} floats, expected {dim}")
            if key.startswith("bucket:"):
                table.bucket_vectors[int(key[len("bucket:"):])] = floats
            elif key.startswith("word:"):
                table.word_vectors[key[len("word:"):]] = floats
            else:
                raise DataError(f"{path}: unknown record key {key!r}")
            seen += 1
        if seen != count:
            raise DataError(f"{path}: header count {count} != {seen} records")
    return table
