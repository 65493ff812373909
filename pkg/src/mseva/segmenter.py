"""Silence-based utterance segmentation.

Speech rhythm splits a track into sentences: any silence run of at least
min_silence_ms (default 0.8 s) is a sentence boundary. Boundaries snap to
the energy-window grid, segments below min_segment_ms merge into their
predecessor, and segments above max_segment_ms split at their weakest
interior energy minimum so no single inference input grows unbounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .audio import SAMPLES_PER_MS, TARGET_RATE
from .errors import EmptyAudio, SegmentOutOfRange

DB_FLOOR = -120.0


@dataclass(frozen=True)
class SilenceProfile:
    min_silence_ms: int = 800
    silence_floor_db: float = -40.0
    window_ms: int = 10
    min_segment_ms: int = 300
    max_segment_ms: int = 30_000

    def __post_init__(self):
        if self.min_silence_ms <= 0 or self.window_ms <= 0:
            raise ValueError("min_silence_ms and window_ms must be positive")
        if self.min_segment_ms >= self.max_segment_ms:
            raise ValueError("min_segment_ms must be below max_segment_ms")


@dataclass
class UtteranceSegment:
    index: int
    start_ms: int
    end_ms: int
    text: str = ""

    def __post_init__(self):
        if self.start_ms >= self.end_ms:
            raise ValueError(f"segment {self.index}: start_ms must precede end_ms")

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


def energy_envelope(samples: np.ndarray, window_ms: int = 10) -> list[tuple[int, float]]:
    """RMS level in dBFS per non-overlapping window of float samples.

    Pure silence maps to the -120 dB floor; a trailing partial window is
    dropped (it is still covered by segment clamping downstream).
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise EmptyAudio("cannot compute the envelope of an empty buffer")
    win = window_ms * SAMPLES_PER_MS
    n_windows = len(arr) // win
    out = []
    for i in range(n_windows):
        rms = float(np.sqrt(np.mean(arr[i * win:(i + 1) * win] ** 2)))
        db = 20.0 * np.log10(rms) if rms > 0 else DB_FLOOR
        out.append((i * window_ms, max(db, DB_FLOOR)))
    if not out:  # shorter than one window: single partial estimate
        rms = float(np.sqrt(np.mean(arr ** 2)))
        out.append((0, max(20.0 * np.log10(rms) if rms > 0 else DB_FLOOR, DB_FLOOR)))
    return out


def detect_silence_runs(envelope: list[tuple[int, float]],
                        profile: SilenceProfile) -> list[tuple[int, int]]:
    """Maximal sub-floor runs of at least min_silence_ms, ordered and disjoint."""
    if not envelope:
        raise EmptyAudio("empty envelope")
    window_ms = profile.window_ms
    runs = []
    run_start = None
    for t, db in envelope:
        if db < profile.silence_floor_db:
            if run_start is None:
                run_start = t
        else:
            if run_start is not None:
                runs.append((run_start, t))
                run_start = None
    if run_start is not None:
        runs.append((run_start, envelope[-1][0] + window_ms))
    return [(s, e) for s, e in runs if e - s >= profile.min_silence_ms]


def plan_segments(duration_ms: int, silence_runs: list[tuple[int, int]],
                  profile: SilenceProfile,
                  envelope: list[tuple[int, float]] | None = None) -> list[UtteranceSegment]:
    """Segments are the complement of silence runs in [0, duration].

    Too-short spans merge into the previous segment (dropped when first);
    too-long spans split recursively at the weakest interior envelope
    minimum (midpoint when no envelope is supplied).
    """
    spans = _complement(duration_ms, silence_runs)
    spans = _merge_short(spans, profile.min_segment_ms)
    split_spans: list[tuple[int, int]] = []
    for span in spans:
        split_spans.extend(_split_long(span, profile, envelope))
    return [UtteranceSegment(index=i, start_ms=s, end_ms=e)
            for i, (s, e) in enumerate(split_spans)]


def _complement(duration_ms: int, runs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    spans = []
    cursor = 0
    for start, end in runs:
        start, end = max(0, start), min(end, duration_ms)
        if start > cursor:
            spans.append((cursor, start))
        cursor = max(cursor, end)
    if cursor < duration_ms:
        spans.append((cursor, duration_ms))
    return spans


def _merge_short(spans: list[tuple[int, int]], min_segment_ms: int) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for start, end in spans:
        if end - start >= min_segment_ms:
            merged.append((start, end))
        elif merged:
            # absorb the short span and the gap before it
            merged[-1] = (merged[-1][0], end)
        # a short first span has no predecessor: dropped
    return merged


def _split_long(span: tuple[int, int], profile: SilenceProfile,
                envelope: list[tuple[int, float]] | None) -> list[tuple[int, int]]:
    start, end = span
    if end - start <= profile.max_segment_ms:
        return [span]
    window_ms = profile.window_ms
    # interior candidates leave at least min_segment_ms on both sides
    lo = start + profile.min_segment_ms
    hi = end - profile.min_segment_ms
    cut = (start + end) // 2 // window_ms * window_ms
    if envelope is not None and hi > lo:
        interior = [(t, db) for t, db in envelope if lo <= t < hi]
        if interior:
            cut = min(interior, key=lambda item: (item[1], item[0]))[0]
    cut = max(start + 1, min(cut, end - 1))
    return _split_long((start, cut), profile, envelope) + \
        _split_long((cut, end), profile, envelope)


def cut_audio(samples: np.ndarray, segments: list[UtteranceSegment]) -> list[np.ndarray]:
    """Sample-exact clips: (end_ms - start_ms) * 16 samples each at 16 kHz."""
    arr = np.asarray(samples)
    total = len(arr)
    clips = []
    for seg in segments:
        start = seg.start_ms * SAMPLES_PER_MS
        end = seg.end_ms * SAMPLES_PER_MS
        if start < 0 or end > total or start >= end:
            raise SegmentOutOfRange(
                f"segment {seg.index} [{seg.start_ms}, {seg.end_ms}) ms exceeds "
                f"{total // SAMPLES_PER_MS} ms of audio")
        clips.append(arr[start:end])
    return clips


def segment_audio(samples: np.ndarray, profile: SilenceProfile) -> list[UtteranceSegment]:
    """Envelope -> silence runs -> planned segments, in one call."""
    envelope = energy_envelope(samples, profile.window_ms)
    runs = detect_silence_runs(envelope, profile)
    duration = len(samples) // SAMPLES_PER_MS
    return plan_segments(duration, runs, profile, envelope)
