"""Application configuration.

One TOML file with sections [media], [segmenter], [asr], [model],
[service]. Resolution rules are an array of tables:

    [[media.resolution_rules]]
    src_w = [470, 490]
    src_h = [550, 570]
    dst_w = 180
    dst_h = 224

Environment overrides: MSEVA_TRANSCODER (transcoder command),
MSEVA_DATA_DIR (service data directory), MSEVA_ASR_MODEL (ASR weight
path), MSEVA_FACE_CASCADE (face cascade XML path).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .media.resolution import DEFAULT_RULES, ResolutionRule, validate_rules


@dataclass
class MediaConfig:
    transcoder: str = ""            # command; empty = auto (ffmpeg, else built-in)
    face_detector: str = "stub"     # stub | blob | cascade
    face_cascade_path: str = ""
    frame_count: int = 10           # default fixed-count sampling policy
    resolution_rules: tuple[ResolutionRule, ...] = DEFAULT_RULES


@dataclass
class SegmenterConfig:
    min_silence_ms: int = 800
    silence_floor_db: float = -40.0
    window_ms: int = 10
    min_segment_ms: int = 300
    max_segment_ms: int = 30_000


@dataclass
class AsrConfig:
    backend: str = "echo"           # echo | whisper
    task: str = "auto"              # auto | recognize | translate
    model_path: str = ""
    language_hint: str = ""
    max_workers: int = 2


@dataclass
class ModelSection:
    """Raw [model] keys; materialized into a ModelConfig by the model package."""
    values: dict = field(default_factory=dict)


@dataclass
class ServiceConfig:
    data_dir: str = "mseva-data"
    port: int = 8000
    max_upload_bytes: int = 256 * 1024 * 1024
    max_duration_ms: int = 180_000
    workers: int = 1
    poll_hint_ms: int = 2000


@dataclass
class AppConfig:
    media: MediaConfig = field(default_factory=MediaConfig)
    segmenter: SegmenterConfig = field(default_factory=SegmenterConfig)
    asr: AsrConfig = field(default_factory=AsrConfig)
    model: ModelSection = field(default_factory=ModelSection)
    service: ServiceConfig = field(default_factory=ServiceConfig)


def _apply_section(obj, table: dict, section: str) -> None:
    for key, value in table.items():
        if not hasattr(obj, key):
            raise ConfigError(f"unknown key [{section}] {key}")
        setattr(obj, key, value)


def _parse_rules(raw_rules) -> tuple[ResolutionRule, ...]:
    rules = []
    for raw in raw_rules:
        try:
            rules.append(ResolutionRule(
                src_width_range=tuple(int(v) for v in raw["src_w"]),
                src_height_range=tuple(int(v) for v in raw["src_h"]),
                dst_width=int(raw["dst_w"]),
                dst_height=int(raw["dst_h"]),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad resolution rule {raw!r}: {exc}") from exc
    return tuple(rules)


def load_config(path=None) -> AppConfig:
    """Load configuration; missing file or sections fall back to defaults."""
    cfg = AppConfig()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        media_table = dict(raw.get("media", {}))
        raw_rules = media_table.pop("resolution_rules", None)
        _apply_section(cfg.media, media_table, "media")
        if raw_rules is not None:
            cfg.media.resolution_rules = _parse_rules(raw_rules)
        _apply_section(cfg.segmenter, raw.get("segmenter", {}), "segmenter")
        _apply_section(cfg.asr, raw.get("asr", {}), "asr")
        cfg.model.values = dict(raw.get("model", {}))
        _apply_section(cfg.service, raw.get("service", {}), "service")

    if os.environ.get("MSEVA_TRANSCODER"):
        cfg.media.transcoder = os.environ["MSEVA_TRANSCODER"]
    if os.environ.get("MSEVA_FACE_CASCADE"):
        cfg.media.face_cascade_path = os.environ["MSEVA_FACE_CASCADE"]
    if os.environ.get("MSEVA_DATA_DIR"):
        cfg.service.data_dir = os.environ["MSEVA_DATA_DIR"]
    if os.environ.get("MSEVA_ASR_MODEL"):
        cfg.asr.model_path = os.environ["MSEVA_ASR_MODEL"]

    validate_rules(cfg.media.resolution_rules)
    seg = cfg.segmenter
    if seg.min_silence_ms <= 0 or seg.window_ms <= 0:
        raise ConfigError("min_silence_ms and window_ms must be positive")
    if seg.min_segment_ms >= seg.max_segment_ms:
        raise ConfigError("min_segment_ms must be below max_segment_ms")
    return cfg
