"""Container normalization and frame sampling.

normalize_container demuxes one mono 16 kHz audio track and one
frame-accessible video file at the target resolution; everything
downstream consumes only these derivatives.
"""
from __future__ import annotations

import hashlib
import json
import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .. import audio as audio_io
from ..errors import FrameDecodeFailure, NoAudioStream, NoVideoStream, UnreadableMedia
from . import riffavi
from .resolution import DEFAULT_RULES, select_resolution_rule
from .transcoder import build_args, resolve_transcoder, run_transcoder
from .types import FrameBatch, MediaAsset


@dataclass(frozen=True)
class FramePolicy:
    """Exactly one of fixed_count / interval_ms must be set."""

    fixed_count: int | None = None
    interval_ms: int | None = None

    def __post_init__(self):
        if (self.fixed_count is None) == (self.interval_ms is None):
            raise ValueError("set exactly one of fixed_count or interval_ms")
        if self.fixed_count is not None and self.fixed_count < 1:
            raise ValueError("fixed_count must be >= 1")
        if self.interval_ms is not None and self.interval_ms <= 0:
            raise ValueError("interval_ms must be positive")


def asset_id_for(path) -> str:
    """Content-addressed asset id (first 16 hex chars of sha256)."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()[:16]


def probe_media(path) -> riffavi.ContainerInfo:
    """Probe streams natively (RIFF) or via ffprobe when available."""
    path = Path(path)
    try:
        return riffavi.probe(path)
    except UnreadableMedia:
        if shutil.which("ffprobe"):
            return _ffprobe(path)
        raise


def _ffprobe(path: Path) -> riffavi.ContainerInfo:
    proc = subprocess.run(
        ["ffprobe", "-v", "error", "-print_format", "json",
         "-show_streams", "-show_format", str(path)],
        capture_output=True, text=True)
    if proc.returncode != 0:
        raise UnreadableMedia(f"{path}: ffprobe failed: {proc.stderr.strip()[:200]}")
    data = json.loads(proc.stdout)
    info = riffavi.ContainerInfo(container="external", has_video=False, has_audio=False)
    for stream in data.get("streams", []):
        if stream.get("codec_type") == "video" and not info.has_video:
            info.has_video = True
            info.width = int(stream.get("width", 0))
            info.height = int(stream.get("height", 0))
            num, _, den = (stream.get("avg_frame_rate") or "0/1").partition("/")
            info.fps = float(num) / float(den) if float(den or 1) else 0.0
            info.frame_count = int(stream.get("nb_frames") or 0)
        elif stream.get("codec_type") == "audio" and not info.has_audio:
            info.has_audio = True
            info.audio_rate = int(stream.get("sample_rate") or 0)
            info.audio_channels = int(stream.get("channels") or 0)
            dur = float(stream.get("duration") or 0.0)
            info.audio_sample_count = int(dur * info.audio_rate)
    if not info.has_video and not info.has_audio:
        raise UnreadableMedia(f"{path}: ffprobe found no streams")
    return info


def normalize_container(source_path, workdir, rules=None, transcoder: str = "",
                        language_hint: str | None = None) -> MediaAsset:
    """Normalize a source video into canonical audio + video derivatives.

    Raises UnreadableMedia, NoAudioStream, or NoVideoStream as distinct
    probe-time failures.
    """
    source_path = Path(source_path)
    info = probe_media(source_path)
    if not info.has_audio:
        raise NoAudioStream(f"{source_path}: container has no audio stream")
    if not info.has_video:
        raise NoVideoStream(f"{source_path}: container has no video stream")

    rule = select_resolution_rule(info.width, info.height,
                                  rules if rules is not None else DEFAULT_RULES)
    workdir = audio_io.ensure_dir(workdir)
    asset_id = asset_id_for(source_path)
    audio_path = workdir / f"{asset_id}.wav"
    video_path = workdir / f"{asset_id}.avi"

    already_canonical = (info.container == "avi" and info.audio_channels == 1
                         and info.audio_rate == audio_io.TARGET_RATE
                         and info.width == rule.dst_width and info.height == rule.dst_height)
    command = resolve_transcoder(transcoder)
    if already_canonical:
        # audio passthrough: demux without resampling, keep frames as-is
        run_transcoder(command, build_args(source_path, audio_out=audio_path))
        shutil.copyfile(source_path, video_path)
    else:
        run_transcoder(command, build_args(
            source_path, audio_out=audio_path, video_out=video_path,
            dst_width=rule.dst_width, dst_height=rule.dst_height))

    samples, rate = audio_io.read_wav(audio_path)
    if rate != audio_io.TARGET_RATE or samples.ndim != 1:
        raise UnreadableMedia(f"{audio_path}: transcoder did not produce mono 16 kHz audio")
    duration = audio_io.duration_ms(samples, rate)
    return MediaAsset(
        asset_id=asset_id,
        source_path=source_path,
        duration_ms=duration,
        width_px=rule.dst_width,
        height_px=rule.dst_height,
        fps=info.fps,
        audio_path=audio_path,
        video_path=video_path,
        language_hint=language_hint,
    )


def frame_timestamps(duration_ms: int, policy: FramePolicy) -> list[int]:
    """Timestamp plan: uniform over [0, duration) or a fixed interval grid."""
    if policy.fixed_count is not None:
        n = policy.fixed_count
        plan = [duration_ms * i // n for i in range(n)]
        return sorted(set(plan))  # collapses duplicates for sub-n-ms clips
    t, out = 0, []
    while t <= duration_ms:
        out.append(t)
        t += policy.interval_ms
    return out


def extract_frames(asset: MediaAsset, policy: FramePolicy) -> FrameBatch:
    """Decode one frame per planned timestamp from the normalized video."""
    reader = riffavi.AviReader(asset.video_path)
    if reader.fps <= 0 or reader.frame_count == 0:
        raise FrameDecodeFailure(f"{asset.video_path}: no decodable frames")
    timestamps = frame_timestamps(asset.duration_ms, policy)
    frames = []
    for t in timestamps:
        idx = min(int(t * reader.fps / 1000.0), reader.frame_count - 1)
        frames.append(reader.read_frame(idx))
    # deduplicate equal timestamps is unnecessary: plan is strictly increasing
    return FrameBatch(asset_id=asset.asset_id, timestamps_ms=timestamps, frames=frames)
