"""Prediction heads on top of the encoder.

* masked-token head: two-layer MLP to vocabulary logits
* statement head (control): mean-pool the member tokens of each node,
  reduce through a relu MLP, then score every ordered node pair with an
  asymmetric bilinear form + sigmoid
* token head (data): reduce every token embedding through a relu MLP and
  score every ordered token pair the same way

Both pairwise heads share the closed form sigma(h_i^T W h_j + b).
"""

from __future__ import annotations

import numpy as np

from deplab.errors import EmptyNode
from deplab.nn import tensor as T
from deplab.nn.model import ModelParams


def mlm_logits(params: ModelParams, h: T.Tensor, positions) -> T.Tensor:
    """Vocabulary logits at the given positions: MLP(h[positions])."""
    picked = T.take_rows(h, np.asarray(positions, dtype=np.int64))
    hidden = T.relu(T.add(T.matmul(picked, params["mlm.w1"]), params["mlm.b1"]))
    return T.add(T.matmul(hidden, params["mlm.w2"]), params["mlm.b2"])


def pool_nodes(h: T.Tensor, node_members: list[list[int]]) -> T.Tensor:
    """Mean of member-token embeddings per node, as one [n_nodes, d] matrix."""
    L = h.shape[0]
    n = len(node_members)
    weights = np.zeros((n, L), dtype=h.value.dtype)
    for k, members in enumerate(node_members):
        if not members:
            raise EmptyNode(f"node {k} has no member tokens")
        weights[k, members] = 1.0 / len(members)
    return T.matmul(T.Tensor(weights), h)


def _bilinear_probs(reduced: T.Tensor, w: T.Tensor, bias: T.Tensor) -> T.Tensor:
    scores = T.add(T.matmul(T.matmul(reduced, w), T.swap_last(reduced)), bias)
    return T.sigmoid(scores)


def cdp_forward(params: ModelParams, h: T.Tensor, node_members: list[list[int]]) -> T.Tensor:
    """Pairwise control-dependency probabilities [n_nodes, n_nodes];
    entry (i, j) scores "node j depends on node i"."""
    pooled = pool_nodes(h, node_members)
    reduced = T.relu(T.add(T.matmul(pooled, params["cdp.reduce.w"]), params["cdp.reduce.b"]))
    return _bilinear_probs(reduced, params["cdp.bilinear"], params["cdp.bias"])


def ddp_forward(params: ModelParams, h: T.Tensor) -> T.Tensor:
    """Pairwise data-dependency probabilities over all token positions, [L, L]."""
    reduced = T.relu(T.add(T.matmul(h, params["ddp.reduce.w"]), params["ddp.reduce.b"]))
    return _bilinear_probs(reduced, params["ddp.bilinear"], params["ddp.bias"])
