"""Model hyperparameters and class/polarity wiring."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from ..errors import ConfigError

DEFAULT_CLASSES = ("happy", "sad", "angry", "neutral")

# emotion class -> binary sentiment; configurable because the class set is
DEFAULT_POLARITY = {
    "happy": "positive",
    "neutral": "positive",
    "sad": "negative",
    "angry": "negative",
}


@dataclass
class ModelConfig:
    num_classes: int = 4
    class_names: tuple[str, ...] = DEFAULT_CLASSES
    polarity_map: dict = field(default_factory=lambda: dict(DEFAULT_POLARITY))

    visual_feature_dim: int = 64
    acoustic_feature_dim: int = 64
    text_feature_dim: int = 64
    encoder_layers: int = 2
    encoder_heads: int = 4
    head_hidden_dim: int = 64
    dropout: float = 0.1
    max_sequence_len: int = 512

    mel_bins: int = 64
    mel_window_ms: int = 25
    mel_hop_ms: int = 10
    audio_patches: int = 16

    visual_backbone: str = "tiny_cnn"
    text_backend: str = "hashing"
    text_embed_dim: int = 32  # token width of the hashing stub backend

    fusion_mode: str = "learned"  # learned | fixed
    fusion_weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)

    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 2:
            raise ConfigError("num_classes must be at least 2")
        self.class_names = tuple(self.class_names)
        if len(self.class_names) != self.num_classes:
            raise ConfigError(f"{self.num_classes} classes but "
                              f"{len(self.class_names)} class names")
        missing = [c for c in self.class_names if c not in self.polarity_map]
        if missing:
            raise ConfigError(f"polarity_map misses classes: {missing}")
        bad = {v for v in self.polarity_map.values()} - {"positive", "negative"}
        if bad:
            raise ConfigError(f"polarity values must be positive/negative, got {bad}")
        self.fusion_weights = tuple(float(w) for w in self.fusion_weights)
        if len(self.fusion_weights) != 3 or not all(math.isfinite(w) for w in self.fusion_weights):
            raise ConfigError("fusion_weights must be three finite values")
        if abs(sum(self.fusion_weights) - 1.0) > 1e-6:
            raise ConfigError(f"fusion_weights must sum to 1, got {sum(self.fusion_weights)}")
        if self.fusion_mode not in ("learned", "fixed"):
            raise ConfigError(f"unknown fusion_mode {self.fusion_mode!r}")
        if self.mel_bins <= 0 or self.mel_window_ms <= 0 or self.mel_hop_ms <= 0:
            raise ConfigError("mel parameters must be positive")
        if self.audio_patches < 1:
            raise ConfigError("audio_patches must be >= 1")
        # the patch count must factor into a (rows, cols) grid
        self.patch_grid  # noqa: B018 - raises on impossible factorizations

    @property
    def patch_grid(self) -> tuple[int, int]:
        """(rows, cols) tiling of the spectrogram, rows <= cols."""
        rows = int(math.isqrt(self.audio_patches))
        while rows > 1 and self.audio_patches % rows:
            rows -= 1
        return rows, self.audio_patches // rows

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, dict):
                value = dict(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown model config keys: {sorted(unknown)}")
        kwargs = dict(raw)
        if "class_names" in kwargs:
            kwargs["class_names"] = tuple(kwargs["class_names"])
        if "fusion_weights" in kwargs:
            kwargs["fusion_weights"] = tuple(kwargs["fusion_weights"])
        return cls(**kwargs)


def tiny_test_config(**overrides) -> ModelConfig:
    """Desk-scale configuration used by gradient and overfit checks."""
    base = dict(
        num_classes=2,
        class_names=("happy", "sad"),
        polarity_map={"happy": "positive", "sad": "negative"},
        visual_feature_dim=8,
        acoustic_feature_dim=8,
        text_feature_dim=8,
        encoder_layers=1,
        encoder_heads=1,
        head_hidden_dim=8,
        dropout=0.0,
        mel_bins=8,
        audio_patches=4,
        text_embed_dim=4,
        max_sequence_len=64,
    )
    base.update(overrides)
    return ModelConfig(**base)
