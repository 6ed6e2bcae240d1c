"""From-scratch attention stack with exact reverse-mode gradients.

Builds up from scaled dot-product attention through 12-head multi-head
attention with an output projection, plus a low-rank key/value compression
(K' = E^T K, V' = E^T V with a learnable E of rank ~10% of the sequence
cap) that cuts attention cost from O(n^2) to O(n k). The small encoder
composes: embedding -> compressed-attention block -> full multi-head block
(residual connections around each) -> masked mean-pool -> linear head.

Everything is float64 numpy; backward passes are hand-derived and checked
against central finite differences in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DataError

NEG_INF = -1e30  # additive key-mask value; exp underflows to exactly 0
PAD_ID = 0

CHECKPOINT_MAGIC = "trihate-encoder-v1"


@dataclass
class AttentionConfig:
    heads: int = 12
    d_k: int = 64
    d_v: int = 64
    d_model: int = 768
    n_max: int = 64
    k: int = 0  # 0 -> computed as ceil(0.10 * n_max)

    def __post_init__(self):
        if self.k <= 0:
            self.k = max(1, math.ceil(0.10 * self.n_max))
        if self.d_k < 1 or self.d_v < 1 or self.heads < 1 or self.d_model < 1:
            raise DataError("attention dimensions must be >= 1")
        if self.k > self.n_max:
            raise DataError(f"projection dim k={self.k} exceeds sequence cap n_max={self.n_max}")


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by row-max subtraction."""
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def scaled_dot_attention(
    Q: np.ndarray, K: np.ndarray, V: np.ndarray, return_weights: bool = False
):
    """softmax(Q K^T / sqrt(d_k)) V with row-wise softmax."""
    if Q.ndim != 2 or K.ndim != 2 or V.ndim != 2:
        raise DataError("scaled_dot_attention expects 2-D Q, K, V")
    if Q.shape[1] != K.shape[1]:
        raise DataError(f"Q has d_k={Q.shape[1]} but K has d_k={K.shape[1]}")
    if K.shape[0] != V.shape[0]:
        raise DataError(f"K has {K.shape[0]} rows but V has {V.shape[0]}")
    for name, m in (("Q", Q), ("K", K), ("V", V)):
        if not np.all(np.isfinite(m)):
            raise DataError(f"scaled_dot_attention: non-finite values in {name}")
    weights = softmax_rows(Q @ K.T / math.sqrt(Q.shape[1]))
    out = weights @ V
    return (out, weights) if return_weights else out


def linformer_project(K: np.ndarray, V: np.ndarray, E: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-compress keys and values: K' = E^T K, V' = E^T V (k rows each)."""
    if E.shape[0] != K.shape[0] or E.shape[0] != V.shape[0]:
        raise DataError(f"E has {E.shape[0]} rows but K/V have {K.shape[0]}/{V.shape[0]}")
    return E.T @ K, E.T @ V


@dataclass
class MultiHeadParams:
    w_q: np.ndarray  # heads x d_model x d_k
    w_k: np.ndarray  # heads x d_model x d_k
    w_v: np.ndarray  # heads x d_model x d_v
    w_o: np.ndarray  # (heads * d_v) x d_model
    e: Optional[np.ndarray] = None  # n_max x k, compression blocks only


def init_multi_head(config: AttentionConfig, rng: np.random.Generator, with_projection: bool) -> MultiHeadParams:
    def mat(*shape):
        fan_in = shape[-2]
        return rng.normal(0.0, 1.0 / math.sqrt(fan_in), size=shape)

    return MultiHeadParams(
        w_q=mat(config.heads, config.d_model, config.d_k),
        w_k=mat(config.heads, config.d_model, config.d_k),
        w_v=mat(config.heads, config.d_model, config.d_v),
        w_o=mat(config.heads * config.d_v, config.d_model),
        e=rng.normal(0.0, 1.0 / math.sqrt(config.n_max), size=(config.n_max, config.k))
        if with_projection
        else None,
    )


def multi_head(
    X: np.ndarray,
    params: MultiHeadParams,
    key_mask: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Per-head Q/K/V projections, attention, concat, output projection.

    ``key_mask`` (bool, per input row) hides padded rows from every query;
    when ``params.e`` is set the keys/values are compressed through E
    instead (masking then relies on masked rows being zero).
    """
    if X.ndim != 2 or X.shape[1] != params.w_q.shape[1]:
        raise DataError(f"multi_head: X has {X.shape[1] if X.ndim == 2 else '?'} columns, expected {params.w_q.shape[1]}")
    out, _ = _multi_head_forward(X, params, key_mask)
    return out


def _multi_head_forward(X, params: MultiHeadParams, key_mask):
    heads = params.w_q.shape[0]
    d_k = params.w_q.shape[2]
    cache = {"X": X, "key_mask": key_mask, "per_head": []}
    outputs = []
    for h in range(heads):
        Q = X @ params.w_q[h]
        K = X @ params.w_k[h]
        V = X @ params.w_v[h]
        if params.e is not None:
            E = params.e[: X.shape[0], :]
            K_c, V_c = linformer_project(K, V, E)
        else:
            K_c, V_c = K, V
        scores = Q @ K_c.T / math.sqrt(d_k)
        if params.e is None and key_mask is not None:
            scores = scores + np.where(key_mask, 0.0, NEG_INF)[None, :]
        A = softmax_rows(scores)
        O = A @ V_c
        cache["per_head"].append({"Q": Q, "K": K, "V": V, "K_c": K_c, "V_c": V_c, "A": A})
        outputs.append(O)
    concat = np.concatenate(outputs, axis=1)
    cache["concat"] = concat
    return concat @ params.w_o, cache


def _softmax_backward(A: np.ndarray, dA: np.ndarray) -> np.ndarray:
    return A * (dA - (dA * A).sum(axis=-1, keepdims=True))


def _multi_head_backward(dY: np.ndarray, params: MultiHeadParams, cache) -> tuple[np.ndarray, MultiHeadParams]:
    X = cache["X"]
    heads = params.w_q.shape[0]
    d_k = params.w_q.shape[2]
    d_v = params.w_v.shape[2]
    scale = 1.0 / math.sqrt(d_k)

    d_wo = cache["concat"].T @ dY
    d_concat = dY @ params.w_o.T
    dX = np.zeros_like(X)
    d_wq = np.zeros_like(params.w_q)
    d_wk = np.zeros_like(params.w_k)
    d_wv = np.zeros_like(params.w_v)
    d_e = np.zeros_like(params.e) if params.e is not None else None

    for h in range(heads):
        hc = cache["per_head"][h]
        dO = d_concat[:, h * d_v : (h + 1) * d_v]
        dA = dO @ hc["V_c"].T
        dV_c = hc["A"].T @ dO
        dS = _softmax_backward(hc["A"], dA)
        dQ = dS @ hc["K_c"] * scale
        dK_c = dS.T @ hc["Q"] * scale
        if params.e is not None:
            E = params.e[: X.shape[0], :]
            dK = E @ dK_c
            dV = E @ dV_c
            d_e[: X.shape[0], :] += hc["K"] @ dK_c.T + hc["V"] @ dV_c.T
        else:
            dK = dK_c
            dV = dV_c
        d_wq[h] = X.T @ dQ
        d_wk[h] = X.T @ dK
        d_wv[h] = X.T @ dV
        dX += dQ @ params.w_q[h].T + dK @ params.w_k[h].T + dV @ params.w_v[h].T

    grads = MultiHeadParams(w_q=d_wq, w_k=d_wk, w_v=d_wv, w_o=d_wo, e=d_e)
    return dX, grads


@dataclass
class EncoderParams:
    embedding: np.ndarray  # vocab_size x d_model, row PAD_ID is the pad slot
    block1: MultiHeadParams  # compressed attention (carries E)
    block2: MultiHeadParams  # full multi-head attention
    w_cls: np.ndarray  # d_model x 2
    b_cls: np.ndarray  # 2
    config: AttentionConfig = field(default_factory=AttentionConfig)
    seed: int = 0


def init_encoder_params(vocab_size: int, config: AttentionConfig, seed: int = 0) -> EncoderParams:
    rng = np.random.default_rng(seed)
    return EncoderParams(
        embedding=rng.normal(0.0, 1.0 / math.sqrt(config.d_model), size=(vocab_size, config.d_model)),
        block1=init_multi_head(config, rng, with_projection=True),
        block2=init_multi_head(config, rng, with_projection=False),
        w_cls=rng.normal(0.0, 1.0 / math.sqrt(config.d_model), size=(config.d_model, 2)),
        b_cls=np.zeros(2),
        config=config,
        seed=seed,
    )


def _prepare_ids(token_ids: Sequence[int], params: EncoderParams) -> tuple[np.ndarray, np.ndarray]:
    if len(token_ids) == 0:
        raise DataError("encoder: empty token sequence")
    vocab_size = params.embedding.shape[0]
    for tid in token_ids:
        if not 0 <= tid < vocab_size:
            raise DataError(f"token id {tid} outside vocabulary of size {vocab_size}")
    n_max = params.config.n_max
    ids = list(token_ids)[:n_max]
    mask = np.zeros(n_max)
    mask[: len(ids)] = 1.0
    padded = np.full(n_max, PAD_ID, dtype=int)
    padded[: len(ids)] = ids
    return padded, mask


def _encoder_forward(token_ids: Sequence[int], params: EncoderParams):
    ids, mask = _prepare_ids(token_ids, params)
    X0 = params.embedding[ids] * mask[:, None]
    Y1, cache1 = _multi_head_forward(X0, params.block1, key_mask=None)
    H1 = X0 + Y1
    key_mask = mask.astype(bool)
    Y2, cache2 = _multi_head_forward(H1, params.block2, key_mask=key_mask)
    H2 = H1 + Y2
    n_real = mask.sum()
    pooled = (H2 * mask[:, None]).sum(axis=0) / n_real
    logits = pooled @ params.w_cls + params.b_cls
    cache = {
        "ids": ids, "mask": mask, "X0": X0, "cache1": cache1, "H1": H1,
        "cache2": cache2, "H2": H2, "pooled": pooled, "n_real": n_real,
    }
    return logits, cache


def encoder_forward(token_ids: Sequence[int], params: EncoderParams) -> np.ndarray:
    """Logits (2,) for one (possibly padded/truncated) token sequence."""
    logits, _ = _encoder_forward(token_ids, params)
    return logits


@dataclass
class EncoderGradients:
    embedding: np.ndarray
    block1: MultiHeadParams
    block2: MultiHeadParams
    w_cls: np.ndarray
    b_cls: np.ndarray


def _zero_grads(params: EncoderParams) -> EncoderGradients:
    def zero_mh(p: MultiHeadParams) -> MultiHeadParams:
        return MultiHeadParams(
            w_q=np.zeros_like(p.w_q), w_k=np.zeros_like(p.w_k), w_v=np.zeros_like(p.w_v),
            w_o=np.zeros_like(p.w_o), e=np.zeros_like(p.e) if p.e is not None else None,
        )

    return EncoderGradients(
        embedding=np.zeros_like(params.embedding),
        block1=zero_mh(params.block1),
        block2=zero_mh(params.block2),
        w_cls=np.zeros_like(params.w_cls),
        b_cls=np.zeros_like(params.b_cls),
    )


def _accumulate_mh(total: MultiHeadParams, delta: MultiHeadParams) -> None:
    total.w_q += delta.w_q
    total.w_k += delta.w_k
    total.w_v += delta.w_v
    total.w_o += delta.w_o
    if total.e is not None:
        total.e += delta.e


def encoder_loss(batch: Sequence[tuple[Sequence[int], int]], params: EncoderParams) -> float:
    """Mean cross-entropy of the batch; targets are class indices {0, 1}."""
    if not batch:
        raise DataError("encoder_loss: empty batch")
    total = 0.0
    for token_ids, target in batch:
        logits, _ = _encoder_forward(token_ids, params)
        shifted = logits - logits.max()
        log_probs = shifted - math.log(np.exp(shifted).sum())
        total -= log_probs[target]
    return total / len(batch)


def encoder_grad(
    batch: Sequence[tuple[Sequence[int], int]], params: EncoderParams
) -> tuple[float, EncoderGradients]:
    """Exact gradients of mean cross-entropy over the batch."""
    if not batch:
        raise DataError("encoder_grad: empty batch")
    grads = _zero_grads(params)
    total_loss = 0.0
    inv_batch = 1.0 / len(batch)
    for token_ids, target in batch:
        logits, cache = _encoder_forward(token_ids, params)
        shifted = logits - logits.max()
        exp = np.exp(shifted)
        probs = exp / exp.sum()
        total_loss -= shifted[target] - math.log(exp.sum())

        d_logits = probs.copy()
        d_logits[target] -= 1.0
        d_logits *= inv_batch

        grads.w_cls += np.outer(cache["pooled"], d_logits)
        grads.b_cls += d_logits
        d_pooled = params.w_cls @ d_logits
        dH2 = (cache["mask"][:, None] / cache["n_real"]) * d_pooled[None, :]

        dH1_res = dH2  # residual: H2 = H1 + Y2
        dX_2, g2 = _multi_head_backward(dH2, params.block2, cache["cache2"])
        _accumulate_mh(grads.block2, g2)
        dH1 = dH1_res + dX_2

        dX0_res = dH1  # residual: H1 = X0 + Y1
        dX_1, g1 = _multi_head_backward(dH1, params.block1, cache["cache1"])
        _accumulate_mh(grads.block1, g1)
        dX0 = dX0_res + dX_1

        dX0 = dX0 * cache["mask"][:, None]
        np.add.at(grads.embedding, cache["ids"], dX0)
    return total_loss * inv_batch, grads


# ---------------------------------------------------------------------------
# Flat parameter vector helpers (finite differences, optimizers, checkpoints)
# ---------------------------------------------------------------------------

def _param_arrays(params: EncoderParams) -> list[tuple[str, np.ndarray]]:
    arrays = [("embedding", params.embedding)]
    for name, block in (("block1", params.block1), ("block2", params.block2)):
        arrays += [
            (f"{name}.w_q", block.w_q),
            (f"{name}.w_k", block.w_k),
            (f"{name}.w_v", block.w_v),
            (f"{name}.w_o", block.w_o),
        ]
        if block.e is not None:
            arrays.append((f"{name}.e", block.e))
    arrays += [("w_cls", params.w_cls), ("b_cls", params.b_cls)]
    return arrays


def _grad_arrays(grads: EncoderGradients) -> list[tuple[str, np.ndarray]]:
    arrays = [("embedding", grads.embedding)]
    for name, block in (("block1", grads.block1), ("block2", grads.block2)):
        arrays += [
            (f"{name}.w_q", block.w_q),
            (f"{name}.w_k", block.w_k),
            (f"{name}.w_v", block.w_v),
            (f"{name}.w_o", block.w_o),
        ]
        if block.e is not None:
            arrays.append((f"{name}.e", block.e))
    arrays += [("w_cls", grads.w_cls), ("b_cls", grads.b_cls)]
    return arrays


def params_to_vector(params: EncoderParams) -> np.ndarray:
    return np.concatenate([a.ravel() for _, a in _param_arrays(params)])


def grads_to_vector(grads: EncoderGradients) -> np.ndarray:
    return np.concatenate([a.ravel() for _, a in _grad_arrays(grads)])


def set_params_from_vector(params: EncoderParams, vector: np.ndarray) -> None:
    offset = 0
    for _, array in _param_arrays(params):
        array.flat[:] = vector[offset : offset + array.size]
        offset += array.size
    if offset != vector.size:
        raise DataError(f"parameter vector has {vector.size} entries, expected {offset}")


def save_encoder_params(params: EncoderParams, path: str | Path) -> None:
    """Versioned text checkpoint: config header + flat arrays in declared order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    c = params.config
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{CHECKPOINT_MAGIC}\n")
        fh.write(
            f"{c.heads} {c.d_k} {c.d_v} {c.d_model} {c.n_max} {c.k} "
            f"{params.embedding.shape[0]} {params.seed}\n"
        )
        for name, array in _param_arrays(params):
            fh.write(f"{name} {' '.join(str(d) for d in array.shape)}\n")
            fh.write(" ".join(f"{x:.17g}" for x in array.ravel()) + "\n")


def load_encoder_params(path: str | Path) -> EncoderParams:
    path = Path(path)
    if not path.exists():
        raise DataError(f"checkpoint not found: {path}")
    with path.open(encoding="utf-8") as fh:
        magic = fh.readline().strip()
        if magic != CHECKPOINT_MAGIC:
            raise DataError(f"{path}: unknown checkpoint version {magic!r}")
        heads, d_k, d_v, d_model, n_max, k, vocab_size, seed = (int(x) for x in fh.readline().split())
        config = AttentionConfig(heads=heads, d_k=d_k, d_v=d_v, d_model=d_model, n_max=n_max, k=k)
        params = init_encoder_params(vocab_size, config, seed=seed)
        params.seed = seed
        for name, target in _param_arrays(params):
            header = fh.readline().split()
            if header[0] != name:
                raise DataError(f"{path}: expected array {name!r}, found {header[0]!r}")
            shape = tuple(int(d) for d in header[1:])
            if shape != target.shape:
                raise DataError(f"{path}: array {name} has shape {shape}, expected {target.shape}")
            values = np.array([float(x) for x in fh.readline().split()])
            target.flat[:] = values
    return params
