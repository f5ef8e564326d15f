"""Adam with a polynomial-decay (power 2) learning-rate schedule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from deplab.nn.model import ModelParams

BETA1 = 0.9
BETA2 = 0.999
ADAM_EPS = 1e-8


def poly_lr(lr0: float, t: int, horizon: int, power: float = 2.0) -> float:
    """lr0 * (1 - t/horizon)^power, clipped at zero past the horizon."""
    remaining = max(0.0, 1.0 - t / horizon)
    return lr0 * remaining ** power


@dataclass
class AdamState:
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0


def adam_step(params: ModelParams, state: AdamState, lr0: float, horizon: int) -> float:
    """One update over all parameters with accumulated gradients; returns the
    learning rate used. Parameters without a gradient this step are skipped
    (their moments do not advance)."""
    state.t += 1
    lr = poly_lr(lr0, state.t, horizon)
    bc1 = 1.0 - BETA1 ** state.t
    bc2 = 1.0 - BETA2 ** state.t
    for name, tensor in params.tensors.items():
        g = tensor.grad
        if g is None:
            continue
        m = state.m.get(name)
        if m is None:
            m = np.zeros_like(tensor.value)
            state.m[name] = m
            state.v[name] = np.zeros_like(tensor.value)
        v = state.v[name]
        m *= BETA1
        m += (1.0 - BETA1) * g
        v *= BETA2
        v += (1.0 - BETA2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        tensor.value = tensor.value - lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
    return lr
