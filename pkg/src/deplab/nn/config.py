"""Model and loss configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from deplab.errors import ConfigError


@dataclass
class ModelConfig:
    vocab_size: int
    d_model: int = 64
    n_layers: int = 2
    n_heads: int = 4
    ffn_dim: int = 256
    max_seq_len: int = 256
    max_nodes: int = 50
    head_hidden: int | None = None  # defaults to d_model
    dropout: float = 0.0
    dtype: str = "float64"  # float64 for test mode, float32 allowed for training

    def __post_init__(self):
        if self.d_model % self.n_heads != 0:
            raise ConfigError("d_model must be divisible by n_heads")
        if self.max_seq_len < 2:
            raise ConfigError("max_seq_len must be at least 2")
        if self.head_hidden is None:
            self.head_hidden = self.d_model

    @classmethod
    def desk(cls, vocab_size: int, **overrides) -> "ModelConfig":
        """Laptop-scale profile: 2 layers, 64-dim, 256-token window."""
        return cls(vocab_size=vocab_size, **overrides)

    @classmethod
    def reference(cls, vocab_size: int, **overrides) -> "ModelConfig":
        """Publication-scale profile (12 layers, 768 dims, 512-token window).
        Valid to construct; not trainable at desk scale."""
        defaults = dict(d_model=768, n_layers=12, n_heads=12, ffn_dim=3072, max_seq_len=512)
        defaults.update(overrides)
        return cls(vocab_size=vocab_size, **defaults)


@dataclass(frozen=True)
class LossWeights:
    """Weights of the control, data and masked-token objectives."""

    control: float = 5.0
    data: float = 20.0
    masked: float = 1.0

    def __post_init__(self):
        if self.control < 0 or self.data < 0 or self.masked < 0:
            raise ConfigError("loss weights must be nonnegative")
        if self.control == 0 and self.data == 0 and self.masked == 0:
            raise ConfigError("at least one loss weight must be positive")

    @classmethod
    def from_objectives(cls, objectives) -> "LossWeights":
        """Ablation profile from objective names, e.g. {"mlm", "cdp"}."""
        names = {o.strip().lower() for o in objectives if o.strip()}
        unknown = names - {"mlm", "cdp", "ddp"}
        if unknown:
            raise ConfigError(f"unknown objectives: {sorted(unknown)}")
        base = cls()
        return cls(
            control=base.control if "cdp" in names else 0.0,
            data=base.data if "ddp" in names else 0.0,
            masked=base.masked if "mlm" in names else 0.0,
        )
