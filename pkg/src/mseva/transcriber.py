"""Utterance transcription through a pluggable ASR backend.

The reference backend wraps a pretrained multilingual speech model used
as-is (no fine-tuning); a deterministic echo stub keeps the pipeline and
CI hermetic. Transcripts serialize to JSON lines, one object per segment,
with sorted keys and no extra whitespace so files are bit-reproducible:

    {"end_ms":1000,"index":0,"start_ms":0,"text":"hi"}
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .audio import TARGET_RATE
from .errors import BackendFailure, InvariantViolation, IoFailure, MalformedLine
from .segmenter import UtteranceSegment

TASK_RECOGNIZE = "recognize"
TASK_TRANSLATE = "translate"


class EchoStubAsr:
    """Deterministic stand-in: transcribes a clip as its duration in ms."""

    name = "echo"
    supported_tasks = (TASK_RECOGNIZE, TASK_TRANSLATE)
    max_concurrency = 8

    def transcribe(self, samples: np.ndarray, sample_rate: int, task: str) -> str:
        return str(int(round(len(samples) * 1000.0 / sample_rate)))


class WhisperAsr:
    """Adapter for an installed multilingual speech recognizer.

    Loads lazily; environments without the model raise BackendFailure at
    construction so callers can surface a clean load-time error.
    """

    name = "whisper"
    supported_tasks = (TASK_RECOGNIZE, TASK_TRANSLATE)
    max_concurrency = 1  # model instances are not thread-safe

    def __init__(self, model_path: str = "", language_hint: str = ""):
        try:
            import whisper  # optional runtime dependency
        except ImportError as exc:
            raise BackendFailure(f"whisper backend unavailable: {exc}") from exc
        self._model = whisper.load_model(model_path or "base")
        self.language_hint = language_hint or None

    def transcribe(self, samples: np.ndarray, sample_rate: int, task: str) -> str:
        audio = np.asarray(samples, dtype=np.float32)
        opts = {"task": "translate" if task == TASK_TRANSLATE else "transcribe"}
        if self.language_hint:
            opts["language"] = self.language_hint
        result = self._model.transcribe(audio, **opts)
        return result.get("text", "").strip()


ASR_BACKENDS = {
    "echo": EchoStubAsr,
    "whisper": WhisperAsr,
}


def make_asr_backend(name: str, model_path: str = "", language_hint: str = ""):
    if name not in ASR_BACKENDS:
        raise BackendFailure(f"unknown ASR backend {name!r} "
                             f"(available: {sorted(ASR_BACKENDS)})")
    if name == "whisper":
        return WhisperAsr(model_path=model_path, language_hint=language_hint)
    return ASR_BACKENDS[name]()


def pick_task(language_hint: str | None, configured: str = "auto") -> str:
    """Default to translation whenever the source is not English."""
    if configured in (TASK_RECOGNIZE, TASK_TRANSLATE):
        return configured
    if language_hint and language_hint.lower().startswith("en"):
        return TASK_RECOGNIZE
    return TASK_TRANSLATE


@dataclass
class Transcript:
    asset_id: str
    segments: list[UtteranceSegment] = field(default_factory=list)
    task: str = TASK_RECOGNIZE
    backend_name: str = ""

    def __post_init__(self):
        for i, seg in enumerate(self.segments):
            if seg.index != i:
                raise InvariantViolation(f"segment indices must be contiguous from 0, "
                                         f"got {seg.index} at position {i}")


def transcribe_segments(clips: list[np.ndarray], segments: list[UtteranceSegment],
                        adapter, task: str, asset_id: str = "",
                        sample_rate: int = TARGET_RATE) -> Transcript:
    """Transcribe every clip; order is preserved and failure is atomic."""
    if len(clips) != len(segments):
        raise ValueError(f"{len(clips)} clips vs {len(segments)} segments")
    if task not in getattr(adapter, "supported_tasks", (task,)):
        raise BackendFailure(f"backend {adapter.name!r} does not support task {task!r}")

    def run(i_clip):
        i, clip = i_clip
        try:
            return adapter.transcribe(clip, sample_rate, task)
        except Exception as exc:
            raise BackendFailure(f"segment {i}: {exc}", index=i) from exc

    workers = max(1, getattr(adapter, "max_concurrency", 1))
    if workers == 1 or len(clips) <= 1:
        texts = [run(item) for item in enumerate(clips)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            texts = list(pool.map(run, enumerate(clips)))

    out_segments = [replace(seg, text=text) for seg, text in zip(segments, texts)]
    return Transcript(asset_id=asset_id, segments=out_segments, task=task,
                      backend_name=getattr(adapter, "name", adapter.__class__.__name__))


def segment_to_json(seg: UtteranceSegment) -> str:
    payload = {"index": seg.index, "start_ms": seg.start_ms,
               "end_ms": seg.end_ms, "text": seg.text}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_transcript(transcript: Transcript, path) -> None:
    """One JSON object per line, UTF-8, LF endings, bit-exact serialization."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for seg in transcript.segments:
                fh.write(segment_to_json(seg) + "\n")
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def read_transcript(path, asset_id: str = "", task: str = TASK_RECOGNIZE,
                    backend_name: str = "") -> Transcript:
    """Inverse of write_transcript; validates ordering and bounds.

    The line format carries only segment fields, so provenance metadata
    (asset, task, backend) is supplied by the caller.
    """
    path = Path(path)
    if not path.is_file():
        raise IoFailure(f"{path}: no such file")
    segments = []
    with open(path, "r", encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                seg = UtteranceSegment(index=int(obj["index"]),
                                       start_ms=int(obj["start_ms"]),
                                       end_ms=int(obj["end_ms"]),
                                       text=str(obj["text"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedLine(str(exc), line_number=n) from exc
            except ValueError as exc:
                raise InvariantViolation(f"line {n}: {exc}") from exc
            segments.append(seg)
    for prev, cur in zip(segments, segments[1:]):
        if cur.start_ms < prev.end_ms:
            raise InvariantViolation(
                f"segments {prev.index} and {cur.index} overlap "
                f"({prev.end_ms} > {cur.start_ms})")
    return Transcript(asset_id=asset_id, segments=segments, task=task,
                      backend_name=backend_name)
