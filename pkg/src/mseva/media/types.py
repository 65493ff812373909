"""Domain types for normalized media assets."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class MediaAsset:
    """A registered short video plus its normalized derivatives.

    ``audio_path`` is the demuxed mono 16 kHz PCM track; ``video_path`` is
    a frame-accessible file at the selected target resolution.
    """

    asset_id: str
    source_path: Path
    duration_ms: int
    width_px: int
    height_px: int
    fps: float
    audio_path: Path
    video_path: Path | None
    language_hint: str | None = None

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("frame dimensions must be positive")


@dataclass
class FrameBatch:
    """Frames sampled from one asset, at the normalized resolution."""

    asset_id: str
    timestamps_ms: list[int]
    frames: list[np.ndarray]  # RGB uint8, all same shape

    def __post_init__(self):
        if len(self.timestamps_ms) != len(self.frames):
            raise ValueError("timestamps and frames must align")
        for a, b in zip(self.timestamps_ms, self.timestamps_ms[1:]):
            if b <= a:
                raise ValueError("timestamps must be strictly increasing")


@dataclass
class FaceCrop:
    """One face region resampled to the model's 48x48 input geometry."""

    frame_timestamp_ms: int
    bbox: tuple[int, int, int, int]  # (x, y, w, h) in frame pixels
    crop: np.ndarray  # 48x48 RGB uint8

    CROP_SIZE = 48

    def __post_init__(self):
        if self.crop.shape[:2] != (self.CROP_SIZE, self.CROP_SIZE):
            raise ValueError(f"crop must be {self.CROP_SIZE}x{self.CROP_SIZE}, "
                             f"got {self.crop.shape}")
