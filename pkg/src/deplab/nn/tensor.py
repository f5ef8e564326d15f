"""Minimal reverse-mode automatic differentiation over numpy arrays.

A Tensor wraps an ndarray value plus a gradient slot. Operations build a
graph; ``backward(loss)`` topologically sorts the subgraph under the loss and
accumulates gradients into every tensor with ``requires_grad``. Parameters
are long-lived tensors, so per-example backward passes accumulate batch
gradients naturally; call ``zero_grads`` between optimizer steps.

Only what the encoder and heads need is implemented: broadcasting
elementwise arithmetic, (batched) matmul, row gather, fused softmax /
log-softmax / layer-norm, relu, sigmoid, log, clamp, reductions and a
per-row column gather for cross-entropy.
"""

from __future__ import annotations

import numpy as np


class Tensor:
    __slots__ = ("value", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, value, requires_grad: bool = False, parents=(), backward=None):
        self.value = value if isinstance(value, np.ndarray) else np.asarray(value)
        self.grad = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    def item(self) -> float:
        return float(self.value)

    def accumulate(self, g: np.ndarray):
        if self.grad is None:
            self.grad = g.copy() if isinstance(g, np.ndarray) else np.asarray(g)
        else:
            self.grad += g

    # operator sugar used sparingly in the model code
    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __matmul__(self, other):
        return matmul(self, other)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def parameter(value: np.ndarray) -> Tensor:
    return Tensor(value, requires_grad=True)


def backward(loss: Tensor):
    """Reverse-accumulate d(loss)/d(tensor) for the graph under ``loss``."""
    topo: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))
    loss.grad = np.ones_like(loss.value)
    for node in reversed(topo):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)


def zero_grads(tensors):
    for t in tensors:
        t.grad = None


def _sum_to_shape(g: np.ndarray, shape) -> np.ndarray:
    """Reduce a broadcast gradient back to the operand's shape."""
    if g.shape == tuple(shape):
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, (gs, ss) in enumerate(zip(g.shape, shape)) if ss == 1 and gs != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    out = Tensor(a.value + b.value, parents=(a, b))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_sum_to_shape(g, a.value.shape))
        if b.requires_grad:
            b.accumulate(_sum_to_shape(g, b.value.shape))

    out._backward = bwd
    return out


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    out = Tensor(a.value - b.value, parents=(a, b))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_sum_to_shape(g, a.value.shape))
        if b.requires_grad:
            b.accumulate(_sum_to_shape(-g, b.value.shape))

    out._backward = bwd
    return out


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    out = Tensor(a.value * b.value, parents=(a, b))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_sum_to_shape(g * b.value, a.value.shape))
        if b.requires_grad:
            b.accumulate(_sum_to_shape(g * a.value, b.value.shape))

    out._backward = bwd
    return out


def scale(a, s: float) -> Tensor:
    a = as_tensor(a)
    out = Tensor(a.value * s, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * s)

    out._backward = bwd
    return out


def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    out = Tensor(a.value @ b.value, parents=(a, b))

    def bwd(g):
        if a.requires_grad:
            ga = g @ np.swapaxes(b.value, -1, -2)
            a.accumulate(_sum_to_shape(ga, a.value.shape))
        if b.requires_grad:
            gb = np.swapaxes(a.value, -1, -2) @ g
            b.accumulate(_sum_to_shape(gb, b.value.shape))

    out._backward = bwd
    return out


def swap_last(a) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.swapaxes(a.value, -1, -2), parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.swapaxes(g, -1, -2))

    out._backward = bwd
    return out


def transpose(a, axes) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.transpose(a.value, axes), parents=(a,))
    inverse = np.argsort(axes)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.transpose(g, inverse))

    out._backward = bwd
    return out


def reshape(a, shape) -> Tensor:
    a = as_tensor(a)
    out = Tensor(a.value.reshape(shape), parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g.reshape(a.value.shape))

    out._backward = bwd
    return out


def take_rows(a, indices) -> Tensor:
    """Row gather (embedding lookup): out[i] = a[indices[i]]."""
    a = as_tensor(a)
    idx = np.asarray(indices)
    out = Tensor(a.value[idx], parents=(a,))

    def bwd(g):
        if a.requires_grad:
            ga = np.zeros_like(a.value)
            np.add.at(ga, idx, g)
            a.accumulate(ga)

    out._backward = bwd
    return out


def gather_per_row(a, cols) -> Tensor:
    """out[i] = a[i, cols[i]] for a 2D tensor."""
    a = as_tensor(a)
    cols = np.asarray(cols)
    rows = np.arange(a.value.shape[0])
    out = Tensor(a.value[rows, cols], parents=(a,))

    def bwd(g):
        if a.requires_grad:
            ga = np.zeros_like(a.value)
            np.add.at(ga, (rows, cols), g)
            a.accumulate(ga)

    out._backward = bwd
    return out


def relu(a) -> Tensor:
    a = as_tensor(a)
    mask = a.value > 0
    out = Tensor(a.value * mask, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * mask)

    out._backward = bwd
    return out


def sigmoid(a) -> Tensor:
    a = as_tensor(a)
    v = a.value
    y = np.where(v >= 0, 1.0 / (1.0 + np.exp(-np.abs(v))), np.exp(-np.abs(v)) / (1.0 + np.exp(-np.abs(v))))
    y = y.astype(v.dtype, copy=False)
    out = Tensor(y, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * y * (1.0 - y))

    out._backward = bwd
    return out


def log(a) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.log(a.value), parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g / a.value)

    out._backward = bwd
    return out


def clamp(a, lo: float, hi: float) -> Tensor:
    a = as_tensor(a)
    clipped = np.clip(a.value, lo, hi)
    passthrough = (a.value > lo) & (a.value < hi)
    out = Tensor(clipped, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * passthrough)

    out._backward = bwd
    return out


def softmax(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    shifted = a.value - a.value.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(y, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            inner = (g * y).sum(axis=axis, keepdims=True)
            a.accumulate((g - inner) * y)

    out._backward = bwd
    return out


def log_softmax(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    shifted = a.value - a.value.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    y = shifted - lse
    out = Tensor(y, parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g - np.exp(y) * g.sum(axis=axis, keepdims=True))

    out._backward = bwd
    return out


def layer_norm(x, gamma, beta, eps: float = 1e-5) -> Tensor:
    """Normalization over the last axis with learned scale and shift."""
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    mu = x.value.mean(axis=-1, keepdims=True)
    centered = x.value - mu
    var = (centered * centered).mean(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = centered * inv_std
    out = Tensor(gamma.value * xhat + beta.value, parents=(x, gamma, beta))

    def bwd(g):
        if gamma.requires_grad:
            gamma.accumulate(_sum_to_shape(g * xhat, gamma.value.shape))
        if beta.requires_grad:
            beta.accumulate(_sum_to_shape(g, beta.value.shape))
        if x.requires_grad:
            dxhat = g * gamma.value
            m1 = dxhat.mean(axis=-1, keepdims=True)
            m2 = (dxhat * xhat).mean(axis=-1, keepdims=True)
            x.accumulate(inv_std * (dxhat - m1 - xhat * m2))

    out._backward = bwd
    return out


def mean_all(a) -> Tensor:
    a = as_tensor(a)
    n = a.value.size
    out = Tensor(np.asarray(a.value.mean(), dtype=a.value.dtype), parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.full_like(a.value, g / n))

    out._backward = bwd
    return out


def sum_all(a) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.asarray(a.value.sum(), dtype=a.value.dtype), parents=(a,))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.full_like(a.value, g))

    out._backward = bwd
    return out


def dropout(a, rate: float, rng: np.random.Generator) -> Tensor:
    if rate <= 0.0:
        return as_tensor(a)
    a = as_tensor(a)
    keep = (rng.random(a.value.shape) >= rate) / (1.0 - rate)
    keep = keep.astype(a.value.dtype)
    return mul(a, Tensor(keep))
