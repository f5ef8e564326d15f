"""Pre-norm transformer encoder over token ids.

Learned absolute positional embeddings, multi-head self-attention, relu FFN,
residual connections around pre-normalized sublayers, and a final layer norm.
Single-example forward: input is one id sequence, output is [L, d_model].
"""

from __future__ import annotations

import math

import numpy as np

from deplab.errors import ShapeError
from deplab.nn import tensor as T
from deplab.nn.model import ModelParams


def _attention(params: ModelParams, prefix: str, x: T.Tensor, n_heads: int) -> T.Tensor:
    L, d = x.shape
    dh = d // n_heads

    def heads(name, bias):
        proj = T.add(T.matmul(x, params[f"{prefix}.{name}"]), params[f"{prefix}.{bias}"])
        return T.transpose(T.reshape(proj, (L, n_heads, dh)), (1, 0, 2))  # [h, L, dh]

    q = heads("wq", "bq")
    k = heads("wk", "bk")
    v = heads("wv", "bv")
    scores = T.scale(T.matmul(q, T.swap_last(k)), 1.0 / math.sqrt(dh))  # [h, L, L]
    attn = T.softmax(scores, axis=-1)
    ctx = T.matmul(attn, v)  # [h, L, dh]
    merged = T.reshape(T.transpose(ctx, (1, 0, 2)), (L, d))
    return T.add(T.matmul(merged, params[f"{prefix}.wo"]), params[f"{prefix}.bo"])


def encoder_forward(params: ModelParams, ids,
                    rng: np.random.Generator | None = None) -> T.Tensor:
    """Contextual embeddings [len(ids), d_model] for one id sequence."""
    config = params.config
    ids = np.asarray(ids, dtype=np.int64)
    if ids.ndim != 1:
        raise ShapeError(f"ids must be one-dimensional, got shape {ids.shape}")
    if len(ids) > config.max_seq_len:
        raise ShapeError(f"sequence length {len(ids)} exceeds max_seq_len {config.max_seq_len}")
    if len(ids) == 0:
        raise ShapeError("empty id sequence")

    tok = T.take_rows(params["emb.token"], ids)
    pos = T.take_rows(params["emb.pos"], np.arange(len(ids)))
    x = T.add(tok, pos)
    drop = config.dropout
    if drop > 0 and rng is not None:
        x = T.dropout(x, drop, rng)
    for i in range(config.n_layers):
        p = f"layer{i}"
        normed = T.layer_norm(x, params[f"{p}.ln1.g"], params[f"{p}.ln1.b"])
        attn_out = _attention(params, f"{p}.attn", normed, config.n_heads)
        if drop > 0 and rng is not None:
            attn_out = T.dropout(attn_out, drop, rng)
        x = T.add(x, attn_out)
        normed = T.layer_norm(x, params[f"{p}.ln2.g"], params[f"{p}.ln2.b"])
        hidden = T.relu(T.add(T.matmul(normed, params[f"{p}.ffn.w1"]), params[f"{p}.ffn.b1"]))
        ffn_out = T.add(T.matmul(hidden, params[f"{p}.ffn.w2"]), params[f"{p}.ffn.b2"])
        if drop > 0 and rng is not None:
            ffn_out = T.dropout(ffn_out, drop, rng)
        x = T.add(x, ffn_out)
    return T.layer_norm(x, params["final_ln.g"], params["final_ln.b"])
