"""Parameter container, initialization, and the checkpoint file format.

Checkpoint layout (single file):

* line 1: magic ``DEPLAB-CKPT v1``
* line 2: JSON header with the config echo, optimizer/RNG state, array
  directory (name, shape, dtype, offset, nbytes) and the SHA-256 of the blob
* the raw parameter blob: arrays concatenated in directory order,
  little-endian, C-contiguous

Loading recomputes the blob hash and refuses corrupt files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json

import numpy as np

from deplab.errors import CheckpointError
from deplab.nn.config import ModelConfig
from deplab.nn.tensor import Tensor, parameter

MAGIC = b"DEPLAB-CKPT v1\n"
EMBED_STD = 0.1


def _sinusoid_table(n_positions: int, d: int, dtype) -> np.ndarray:
    """Sinusoidal values as the *initialization* of the learned position
    table: relative-offset structure is available from step one instead of
    having to emerge position by position."""
    position = np.arange(n_positions)[:, None]
    dim = np.arange(d // 2)[None, :]
    angle = position / np.power(10000.0, 2 * dim / d)
    table = np.zeros((n_positions, d))
    table[:, 0::2] = np.sin(angle)
    table[:, 1::2] = np.cos(angle)
    return (table * 0.5).astype(dtype)


class ModelParams:
    def __init__(self, config: ModelConfig, tensors: dict[str, Tensor]):
        self.config = config
        self.tensors = tensors

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def names(self) -> list[str]:
        return list(self.tensors.keys())

    def head_names(self, head: str) -> list[str]:
        return [n for n in self.tensors if n.startswith(head + ".")]


def init_params(config: ModelConfig, seed: int = 0,
                ident_ids=None) -> ModelParams:
    """Fresh parameters. ``ident_ids`` (vocabulary ids whose pieces are
    identifier-shaped) places an identifier-indicator feature in embedding
    dimension 0 and keys the data head's reduce units on it, so token kinds
    the masked pair loss never trains default to the relu off state."""
    rng = np.random.default_rng(seed)
    dtype = np.dtype(config.dtype)
    d, f, h, v = config.d_model, config.ffn_dim, config.head_hidden, config.vocab_size

    def linear(fan_in, fan_out):
        # fan-scaled init keeps activations O(1) at this small width
        std = (2.0 / (fan_in + fan_out)) ** 0.5
        return parameter((rng.standard_normal((fan_in, fan_out)) * std).astype(dtype))

    def embed(*shape):
        return parameter((rng.standard_normal(shape) * EMBED_STD).astype(dtype))

    def zeros(*shape):
        return parameter(np.zeros(shape, dtype=dtype))

    def ones(*shape):
        return parameter(np.ones(shape, dtype=dtype))

    tensors: dict[str, Tensor] = {
        "emb.token": embed(v, d),
        "emb.pos": parameter(_sinusoid_table(config.max_seq_len, d, dtype)),
    }
    for i in range(config.n_layers):
        p = f"layer{i}"
        tensors[f"{p}.ln1.g"] = ones(d)
        tensors[f"{p}.ln1.b"] = zeros(d)
        for proj in ("wq", "wk", "wv", "wo"):
            tensors[f"{p}.attn.{proj}"] = linear(d, d)
        for bias in ("bq", "bk", "bv", "bo"):
            tensors[f"{p}.attn.{bias}"] = zeros(d)
        tensors[f"{p}.ln2.g"] = ones(d)
        tensors[f"{p}.ln2.b"] = zeros(d)
        tensors[f"{p}.ffn.w1"] = linear(d, f)
        tensors[f"{p}.ffn.b1"] = zeros(f)
        tensors[f"{p}.ffn.w2"] = linear(f, d)
        tensors[f"{p}.ffn.b2"] = zeros(d)
    tensors["final_ln.g"] = ones(d)
    tensors["final_ln.b"] = zeros(d)

    tensors["mlm.w1"] = linear(d, d)
    tensors["mlm.b1"] = zeros(d)
    tensors["mlm.w2"] = linear(d, v)
    tensors["mlm.b2"] = zeros(v)

    for head in ("cdp", "ddp"):
        tensors[f"{head}.reduce.w"] = linear(d, h)
        tensors[f"{head}.reduce.b"] = zeros(h)
        tensors[f"{head}.bilinear"] = linear(h, h)
        tensors[f"{head}.bias"] = zeros()
    # The data head is trained only on identifier pairs but evaluated on all
    # pairs, so untrained token kinds must default to "no dependency":
    # * scalar bias starts at the strongly negative value it converges to
    # * bilinear gets a negative diagonal: with non-negative reduced
    #   activations the quadratic term starts as an energy penalty, so any
    #   high-activation pair scores negative until training carves out an
    #   explicitly positive matching structure
    # * with ident_ids given, embedding dim 0 carries a +/-1 identifier
    #   indicator and every reduce unit is keyed on it, parking
    #   non-identifier inputs behind the (negatively biased) relu
    tensors["ddp.bias"].value = np.asarray(-4.0, dtype=dtype)
    tensors["ddp.bilinear"].value -= 0.08 * np.eye(h, dtype=dtype)
    if ident_ids:
        flags = np.full(v, -1.0, dtype=dtype)
        flags[sorted(ident_ids)] = 1.0
        tensors["emb.token"].value[:, 0] = flags
        tensors["ddp.reduce.w"].value[0, :] = 1.0
        tensors["ddp.reduce.b"].value -= 1.0
    else:
        tensors["ddp.reduce.b"].value -= 1.0
    return ModelParams(config, tensors)


def save_checkpoint(path, params: ModelParams, extra: dict | None = None) -> str:
    """Write the checkpoint; returns the blob's SHA-256 hex digest."""
    chunks: list[bytes] = []
    directory = []
    offset = 0
    for name, tensor in params.tensors.items():
        arr = np.ascontiguousarray(tensor.value)
        if arr.dtype.byteorder == ">":
            arr = arr.astype(arr.dtype.newbyteorder("<"))
        raw = arr.tobytes()
        directory.append(
            {
                "name": name,
                "shape": list(tensor.value.shape),
                "dtype": np.dtype(arr.dtype).newbyteorder("<").str,
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        chunks.append(raw)
        offset += len(raw)
    blob = b"".join(chunks)
    digest = hashlib.sha256(blob).hexdigest()
    header = {
        "config": dataclasses.asdict(params.config),
        "arrays": directory,
        "blob_sha256": digest,
        "extra": extra or {},
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(json.dumps(header, separators=(",", ":")).encode("utf-8") + b"\n")
        fh.write(blob)
    return digest


def load_checkpoint(path) -> tuple[ModelParams, dict]:
    with open(path, "rb") as fh:
        magic = fh.readline()
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        try:
            header = json.loads(fh.readline().decode("utf-8"))
        except ValueError as exc:
            raise CheckpointError(f"{path}: unreadable header: {exc}") from exc
        blob = fh.read()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != header.get("blob_sha256"):
        raise CheckpointError(f"{path}: blob hash mismatch, refusing to load")
    config = ModelConfig(**header["config"])
    tensors: dict[str, Tensor] = {}
    for entry in header["arrays"]:
        raw = blob[entry["offset"] : entry["offset"] + entry["nbytes"]]
        arr = np.frombuffer(raw, dtype=np.dtype(entry["dtype"])).reshape(entry["shape"]).copy()
        tensors[entry["name"]] = parameter(arr)
    return ModelParams(config, tensors), header.get("extra", {})


def checkpoint_digest(path) -> str:
    """SHA-256 of the whole checkpoint file."""
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()
