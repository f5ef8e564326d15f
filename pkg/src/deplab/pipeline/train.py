"""Joint pre-training loop.

Per step: corrupt each example's token ids (when the masked objective is
active), run one encoder forward, compute the active losses, reverse-
accumulate, average gradients over the batch and take one Adam step on the
polynomial schedule. Objectives with zero weight are skipped entirely, so an
ablation run cannot touch the excluded heads' parameters.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from deplab.data.groundtruth import TrainingExample
from deplab.nn.adam import AdamState, adam_step
from deplab.nn.config import LossWeights, ModelConfig
from deplab.nn.encoder import encoder_forward
from deplab.nn.heads import cdp_forward, ddp_forward
from deplab.nn.losses import cdp_loss, ddp_loss, joint_loss, mlm_corrupt, mlm_loss
from deplab.nn.model import ModelParams, init_params, save_checkpoint
from deplab.nn.tensor import backward, zero_grads

log = logging.getLogger(__name__)


@dataclass
class TrainRunConfig:
    model: ModelConfig
    weights: LossWeights = field(default_factory=LossWeights)
    batch_size: int = 16
    epochs: int = 8
    lr0: float = 3e-4
    horizon: int | None = None  # optimizer steps; defaults to the full run
    clip_norm: float | None = 1.0  # global gradient-norm clip; None disables
    seed: int = 0
    checkpoint_every: int = 0   # epochs; 0 = final checkpoint only
    out_path: str | None = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass
class EpochStats:
    epoch: int
    joint: float
    cdp: float
    ddp: float
    mlm: float
    lr: float
    seconds: float


def example_losses(params: ModelParams, ex: TrainingExample, weights: LossWeights,
                   mask_id: int, n_specials: int, rng: np.random.Generator):
    """Forward pass and the three per-example loss tensors (None = skipped)."""
    ids = ex.ids
    positions: list[int] = []
    if weights.masked > 0:
        corrupted, positions = mlm_corrupt(ids, n_specials, mask_id,
                                           params.config.vocab_size, rng)
    else:
        corrupted = np.asarray(ids, dtype=np.int64)
    h = encoder_forward(params, corrupted, rng=rng)
    l_cdp = l_ddp = l_mlm = None
    if weights.control > 0 and ex.node_members:
        p_c = cdp_forward(params, h, ex.node_members)
        l_cdp = cdp_loss(p_c, [tuple(p) for p in ex.gc], len(ex.node_members))
    if weights.data > 0 and any(ex.ident_mask):
        p_d = ddp_forward(params, h)
        l_ddp = ddp_loss(p_d, [tuple(p) for p in ex.gd], ex.ident_mask)
    if weights.masked > 0:
        l_mlm = mlm_loss(params, h, ids, positions)
    return l_cdp, l_ddp, l_mlm


def pretrain(config: TrainRunConfig, examples: list[TrainingExample],
             mask_id: int, n_specials: int = 4,
             ident_ids=None) -> tuple[ModelParams, list[EpochStats]]:
    """Train from random initialization; returns params and per-epoch stats.
    Writes checkpoints when ``config.out_path`` is set."""
    params = init_params(config.model, seed=config.seed, ident_ids=ident_ids)
    rng = np.random.default_rng(config.seed)
    state = AdamState()
    n = len(examples)
    steps_per_epoch = max(1, math.ceil(n / config.batch_size))
    horizon = config.horizon or config.epochs * steps_per_epoch
    history: list[EpochStats] = []
    weights = config.weights

    for epoch in range(config.epochs):
        t0 = time.perf_counter()
        order = rng.permutation(n)
        sums = {"joint": 0.0, "cdp": 0.0, "ddp": 0.0, "mlm": 0.0}
        counts = {"cdp": 0, "ddp": 0, "mlm": 0}
        lr = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            zero_grads(params.tensors.values())
            for idx in batch:
                ex = examples[int(idx)]
                l_cdp, l_ddp, l_mlm = example_losses(params, ex, weights,
                                                     mask_id, n_specials, rng)
                total = joint_loss(l_cdp, l_ddp, l_mlm, weights)
                if total.requires_grad:
                    backward(total)
                sums["joint"] += total.item()
                for key, term in (("cdp", l_cdp), ("ddp", l_ddp), ("mlm", l_mlm)):
                    if term is not None:
                        sums[key] += term.item()
                        counts[key] += 1
            scale = 1.0 / len(batch)
            for tensor in params.tensors.values():
                if tensor.grad is not None:
                    tensor.grad *= scale
            if config.clip_norm is not None:
                total_sq = 0.0
                for tensor in params.tensors.values():
                    if tensor.grad is not None:
                        total_sq += float(np.sum(tensor.grad.astype(np.float64) ** 2))
                norm = total_sq ** 0.5
                if norm > config.clip_norm:
                    shrink = config.clip_norm / norm
                    for tensor in params.tensors.values():
                        if tensor.grad is not None:
                            tensor.grad *= shrink
            lr = adam_step(params, state, config.lr0, horizon)
        stats = EpochStats(
            epoch=epoch,
            joint=sums["joint"] / n,
            cdp=sums["cdp"] / max(1, counts["cdp"]),
            ddp=sums["ddp"] / max(1, counts["ddp"]),
            mlm=sums["mlm"] / max(1, counts["mlm"]),
            lr=lr,
            seconds=time.perf_counter() - t0,
        )
        history.append(stats)
        log.info("epoch %d: joint %.4f cdp %.4f ddp %.4f mlm %.4f lr %.2e (%.1fs)",
                 stats.epoch, stats.joint, stats.cdp, stats.ddp, stats.mlm,
                 stats.lr, stats.seconds)
        if config.out_path and config.checkpoint_every and \
                (epoch + 1) % config.checkpoint_every == 0 and epoch + 1 < config.epochs:
            _save(config, params, history, f"epoch{epoch}")
    if config.out_path:
        _save(config, params, history, "final")
    return params, history


def _save(config: TrainRunConfig, params: ModelParams, history: list[EpochStats], tag: str):
    path = Path(config.out_path)
    if tag != "final":
        path = path.with_suffix(f".{tag}{path.suffix}")
    extra = {
        "seed": config.seed,
        "weights": [config.weights.control, config.weights.data, config.weights.masked],
        "batch_size": config.batch_size,
        "epochs_completed": history[-1].epoch + 1 if history else 0,
        "lr0": config.lr0,
        "loss_history": [[s.epoch, s.joint, s.cdp, s.ddp, s.mlm] for s in history],
    }
    save_checkpoint(path, params, extra=extra)
    log.info("checkpoint written: %s", path)
