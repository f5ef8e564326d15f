from deplab.nn.adam import AdamState, adam_step, poly_lr
from deplab.nn.config import LossWeights, ModelConfig
from deplab.nn.encoder import encoder_forward
from deplab.nn.heads import cdp_forward, ddp_forward, mlm_logits, pool_nodes
from deplab.nn.losses import cdp_loss, ddp_loss, joint_loss, mlm_corrupt, mlm_loss
from deplab.nn.model import (
    ModelParams,
    checkpoint_digest,
    init_params,
    load_checkpoint,
    save_checkpoint,
)
from deplab.nn.tensor import Tensor, backward, zero_grads

__all__ = [
    "AdamState",
    "adam_step",
    "poly_lr",
    "LossWeights",
    "ModelConfig",
    "encoder_forward",
    "cdp_forward",
    "ddp_forward",
    "mlm_logits",
    "pool_nodes",
    "cdp_loss",
    "ddp_loss",
    "joint_loss",
    "mlm_corrupt",
    "mlm_loss",
    "ModelParams",
    "checkpoint_digest",
    "init_params",
    "load_checkpoint",
    "save_checkpoint",
    "Tensor",
    "backward",
    "zero_grads",
]
