"""The three training objectives and their corruption/masking rules.

* masked-token loss: mean negative log-likelihood over the corrupted
  positions, softmax over the full vocabulary
* control loss: binary cross-entropy averaged over all node_count^2 ordered
  node pairs
* data loss: binary cross-entropy over token pairs whose endpoints are both
  identifier subtokens, normalized by (number of identifier tokens)^2

Probabilities are clamped to [EPS, 1-EPS] before logs, so adversarial
predictions cannot produce NaN or infinity. A loss term that has nothing to
train on (no masked positions, no identifier tokens) returns None and the
joint loss skips it.
"""

from __future__ import annotations

import numpy as np

from deplab.nn import tensor as T
from deplab.nn.config import LossWeights

EPS = 1e-7

MASK_FRACTION = 0.15
KEEP_FRACTION = 0.10   # of the sampled positions, left unchanged
RANDOM_FRACTION = 0.10  # of the sampled positions, replaced by a random token


def mlm_corrupt(ids, n_specials: int, mask_id: int, vocab_size: int,
                rng: np.random.Generator) -> tuple[np.ndarray, list[int]]:
    """Independently sample non-[CLS] positions at 15%; of those, 80% become
    [MASK], 10% a uniformly random non-special token, 10% stay unchanged.
    Returns (corrupted ids, sampled positions)."""
    ids = np.asarray(ids, dtype=np.int64)
    corrupted = ids.copy()
    positions: list[int] = []
    for i in range(1, len(ids)):
        if rng.random() >= MASK_FRACTION:
            continue
        positions.append(i)
        r = rng.random()
        if r < 1.0 - KEEP_FRACTION - RANDOM_FRACTION:
            corrupted[i] = mask_id
        elif r < 1.0 - KEEP_FRACTION:
            corrupted[i] = int(rng.integers(n_specials, vocab_size))
        # else: keep the original token
    return corrupted, positions


def mlm_loss(params, h: T.Tensor, original_ids, positions) -> T.Tensor | None:
    """Mean NLL of the true tokens at the sampled positions; None when no
    position was sampled (the term is skipped)."""
    if not positions:
        return None
    from deplab.nn.heads import mlm_logits

    logits = mlm_logits(params, h, positions)
    logprobs = T.log_softmax(logits, axis=-1)
    targets = np.asarray(original_ids, dtype=np.int64)[np.asarray(positions)]
    picked = T.gather_per_row(logprobs, targets)
    return T.scale(T.sum_all(picked), -1.0 / len(positions))


def _bce_matrix(probs: T.Tensor, positive_pairs, shape) -> T.Tensor:
    """Elementwise binary cross-entropy against a sparse 0/1 target."""
    y = np.zeros(shape, dtype=probs.value.dtype)
    for i, j in positive_pairs:
        y[i, j] = 1.0
    p = T.clamp(probs, EPS, 1.0 - EPS)
    log_p = T.log(p)
    log_not_p = T.log(T.add(T.scale(p, -1.0), 1.0))
    term_pos = T.mul(T.Tensor(y), log_p)
    term_neg = T.mul(T.Tensor(1.0 - y), log_not_p)
    return T.scale(T.add(term_pos, term_neg), -1.0)


def cdp_loss(p_c: T.Tensor, gc_pairs, node_count: int) -> T.Tensor:
    """Cross-entropy averaged over all node_count^2 ordered pairs."""
    assert node_count >= 1
    bce = _bce_matrix(p_c, gc_pairs, (node_count, node_count))
    return T.scale(T.sum_all(bce), 1.0 / (node_count * node_count))


def ddp_loss(p_d: T.Tensor, gd_pairs, ident_mask) -> T.Tensor | None:
    """Masked cross-entropy over identifier-identifier token pairs,
    normalized by (sum of the mask)^2; None when the mask is empty."""
    mask = np.asarray(ident_mask, dtype=p_d.value.dtype)
    total = float(mask.sum())
    if total < 1:
        return None
    L = p_d.shape[0]
    bce = _bce_matrix(p_d, gd_pairs, (L, L))
    pair_mask = np.outer(mask, mask)
    masked = T.mul(bce, T.Tensor(pair_mask))
    return T.scale(T.sum_all(masked), 1.0 / (total * total))


def joint_loss(l_cdp: T.Tensor | None, l_ddp: T.Tensor | None,
               l_mlm: T.Tensor | None, weights: LossWeights) -> T.Tensor:
    """weights.control * cdp + weights.data * ddp + weights.masked * mlm;
    skipped terms contribute zero."""
    total = None
    for term, weight in ((l_cdp, weights.control), (l_ddp, weights.data),
                         (l_mlm, weights.masked)):
        if term is None or weight == 0.0:
            continue
        piece = T.scale(term, weight)
        total = piece if total is None else T.add(total, piece)
    if total is None:
        return T.Tensor(np.zeros(()))
    return total
