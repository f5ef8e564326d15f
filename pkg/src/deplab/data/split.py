"""Dedup and train/valid/test splitting.

Exact-match dedup on a whitespace-normalized source hash: only the first
occurrence of each distinct function survives, so no valid/test hash can
appear in train. The surviving representatives are shuffled under a fixed
seed and split by the given ratios.
"""

from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field

log = logging.getLogger(__name__)


def normalized_hash(source: str) -> str:
    normalized = " ".join(source.split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()


@dataclass
class CorpusSplit:
    train: list[int]
    valid: list[int]
    test: list[int]
    hashes: dict[str, int] = field(default_factory=dict)  # hash -> representative index

    def all_ids(self) -> list[int]:
        return self.train + self.valid + self.test


def dedup_and_split(corpus: list[str], ratios=(0.8, 0.1, 0.1), seed=0) -> CorpusSplit:
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    hashes: dict[str, int] = {}
    uniques: list[int] = []
    for idx, source in enumerate(corpus):
        h = normalized_hash(source)
        if h not in hashes:
            hashes[h] = idx
            uniques.append(idx)
    dropped = len(corpus) - len(uniques)
    if dropped:
        log.info("dedup dropped %d duplicate functions of %d", dropped, len(corpus))

    rng = random.Random(seed)
    order = list(uniques)
    rng.shuffle(order)
    n = len(order)
    # valid/test floor, remainder to train: a degenerate corpus keeps its
    # single representative trainable
    n_valid = int(ratios[1] * n)
    n_test = int(ratios[2] * n)
    n_train = n - n_valid - n_test
    split = CorpusSplit(
        train=sorted(order[:n_train]),
        valid=sorted(order[n_train : n_train + n_valid]),
        test=sorted(order[n_train + n_valid : n_train + n_valid + n_test]),
        hashes=hashes,
    )
    if n and (not split.valid or not split.test):
        log.warning("degenerate split: %d uniques -> sizes (%d, %d, %d)",
                    n, len(split.train), len(split.valid), len(split.test))
    return split
