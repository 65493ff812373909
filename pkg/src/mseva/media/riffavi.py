"""Minimal RIFF container support: AVI (MJPEG video + PCM audio) and WAV.

The pipeline normalizes everything into RIFF containers, so a small
self-contained mux/demux layer is enough to probe streams, demux audio,
and decode frames deterministically. JPEG coding is delegated to Pillow.

Only the features the pipeline needs are implemented: one video stream
('MJPG', 24-bit) and at most one PCM audio stream (16-bit).
"""
from __future__ import annotations

import io
import struct
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import FrameDecodeFailure, UnreadableMedia

AVIF_HASINDEX = 0x00000010
AVIIF_KEYFRAME = 0x00000010


@dataclass
class ContainerInfo:
    """Stream-level facts discovered by probing a container."""

    container: str  # "avi" | "wav"
    has_video: bool
    has_audio: bool
    width: int = 0
    height: int = 0
    fps: float = 0.0
    frame_count: int = 0
    audio_rate: int = 0
    audio_channels: int = 0
    audio_sample_count: int = 0

    @property
    def video_duration_ms(self) -> int:
        if not self.has_video or self.fps <= 0:
            return 0
        return int(round(self.frame_count * 1000.0 / self.fps))

    @property
    def audio_duration_ms(self) -> int:
        if not self.has_audio or self.audio_rate <= 0:
            return 0
        return int(round(self.audio_sample_count * 1000.0 / self.audio_rate))


def _chunk(fourcc: bytes, payload: bytes) -> bytes:
    data = struct.pack("<4sI", fourcc, len(payload)) + payload
    if len(payload) % 2:
        data += b"\x00"
    return data


def _list_chunk(list_type: bytes, payload: bytes) -> bytes:
    return _chunk(b"LIST", list_type + payload)


class AviWriter:
    """Writes an AVI with one MJPEG video stream and optional PCM audio.

    Frames and audio are buffered and muxed on close; callers submit RGB
    uint8 frames and int16 samples in presentation order.
    """

    def __init__(self, path, width: int, height: int, fps: float,
                 audio_rate: int = 0, audio_channels: int = 0,
                 jpeg_quality: int = 90):
        self.path = Path(path)
        self.width = int(width)
        self.height = int(height)
        self.fps = float(fps)
        self.audio_rate = int(audio_rate)
        self.audio_channels = int(audio_channels)
        self.jpeg_quality = jpeg_quality
        self._frames: list[bytes] = []
        self._audio = bytearray()
        self._closed = False

    def write_frame(self, rgb: np.ndarray) -> None:
        if rgb.shape != (self.height, self.width, 3) or rgb.dtype != np.uint8:
            raise ValueError(f"expected uint8 frame of shape "
                             f"({self.height}, {self.width}, 3), got {rgb.shape} {rgb.dtype}")
        buf = io.BytesIO()
        Image.fromarray(rgb).save(buf, format="JPEG", quality=self.jpeg_quality)
        self._frames.append(buf.getvalue())

    def append_audio(self, samples: np.ndarray) -> None:
        """Append int16 samples, shape (n,) mono or (n, channels)."""
        if self.audio_channels == 0:
            raise ValueError("writer was created without an audio stream")
        arr = np.asarray(samples, dtype=np.int16)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.shape[1] != self.audio_channels:
            raise ValueError(f"expected {self.audio_channels} channels, got {arr.shape[1]}")
        self._audio.extend(arr.astype("<i2").tobytes())

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self.path.write_bytes(self._build())

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _build(self) -> bytes:
        n_frames = len(self._frames)
        has_audio = self.audio_channels > 0
        block_align = 2 * self.audio_channels if has_audio else 0
        byte_rate = self.audio_rate * block_align if has_audio else 0

        # movi payload: video frames interleaved with per-frame audio spans
        movi = bytearray(b"movi")
        index = []  # (fourcc, offset_from_movi_fourcc, size)
        audio_pos = 0
        audio_bytes = bytes(self._audio)
        for i, jpeg in enumerate(self._frames):
            index.append((b"00dc", len(movi), len(jpeg)))
            movi += _chunk(b"00dc", jpeg)
            if has_audio:
                # audio due by the end of frame i+1, aligned to whole blocks
                due = int(round((i + 1) * self.audio_rate / self.fps)) * block_align
                due = min(max(due, audio_pos), len(audio_bytes))
                span = audio_bytes[audio_pos:due]
                if span:
                    index.append((b"01wb", len(movi), len(span)))
                    movi += _chunk(b"01wb", span)
                    audio_pos = due
        if has_audio and audio_pos < len(audio_bytes):
            span = audio_bytes[audio_pos:]
            index.append((b"01wb", len(movi), len(span)))
            movi += _chunk(b"01wb", span)

        idx1 = bytearray()
        for fourcc, offset, size in index:
            idx1 += struct.pack("<4sIII", fourcc, AVIIF_KEYFRAME, offset, size)

        max_frame = max((len(f) for f in self._frames), default=0)
        usec_per_frame = int(round(1_000_000 / self.fps)) if self.fps > 0 else 0
        avih = struct.pack(
            "<IIIIIIIIIIIIII",
            usec_per_frame, byte_rate + max_frame * int(round(self.fps)), 0,
            AVIF_HASINDEX, n_frames, 0, 2 if has_audio else 1,
            max_frame, self.width, self.height, 0, 0, 0, 0)

        vstrh = struct.pack(
            "<4s4sIHHIIIIIIIIhhhh",
            b"vids", b"MJPG", 0, 0, 0, 0,
            1000, int(round(self.fps * 1000)),  # scale, rate
            0, n_frames, max_frame, 0xFFFFFFFF, 0,
            0, 0, self.width, self.height)
        vstrf = struct.pack(
            "<IiiHH4sIiiII",
            40, self.width, self.height, 1, 24, b"MJPG",
            self.width * self.height * 3, 0, 0, 0, 0)
        streams = _list_chunk(b"strl", _chunk(b"strh", vstrh) + _chunk(b"strf", vstrf))

        if has_audio:
            n_blocks = len(audio_bytes) // block_align
            astrh = struct.pack(
                "<4s4sIHHIIIIIIIIhhhh",
                b"auds", b"\x00\x00\x00\x00", 0, 0, 0, 0,
                block_align, byte_rate,  # scale, rate: rate/scale = samples/s
                0, n_blocks, byte_rate, 0xFFFFFFFF, block_align,
                0, 0, 0, 0)
            astrf = struct.pack(
                "<HHIIHH",
                1, self.audio_channels, self.audio_rate, byte_rate, block_align, 16)
            streams += _list_chunk(b"strl", _chunk(b"strh", astrh) + _chunk(b"strf", astrf))

        hdrl = _list_chunk(b"hdrl", _chunk(b"avih", avih) + streams)
        body = hdrl + _list_chunk(b"movi", bytes(movi[4:])) + _chunk(b"idx1", bytes(idx1))
        return struct.pack("<4sI4s", b"RIFF", len(body) + 4, b"AVI ") + body


class AviReader:
    """Reads AVIs produced by this module or by OpenCV's MJPG writer."""

    def __init__(self, path):
        self.path = Path(path)
        self._data = self.path.read_bytes()
        self.width = 0
        self.height = 0
        self.fps = 0.0
        self.frame_count = 0
        self.audio_rate = 0
        self.audio_channels = 0
        self._video_codec = b""
        self._frame_spans: list[tuple[int, int]] = []
        self._audio_spans: list[tuple[int, int]] = []
        self._parse()

    @property
    def has_video(self) -> bool:
        return bool(self._frame_spans)

    @property
    def has_audio(self) -> bool:
        return self.audio_channels > 0 and bool(self._audio_spans)

    def _parse(self) -> None:
        data = self._data
        if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"AVI ":
            raise UnreadableMedia(f"{self.path}: not an AVI container")
        stream_types: list[bytes] = []
        try:
            self._walk(12, len(data), stream_types)
        except (struct.error, IndexError) as exc:
            raise UnreadableMedia(f"{self.path}: truncated or corrupt AVI: {exc}") from exc
        if not self._frame_spans and not self._audio_spans:
            raise UnreadableMedia(f"{self.path}: AVI contains no stream data")
        if self.fps > 0:
            self.frame_count = len(self._frame_spans)

    def _walk(self, pos: int, end: int, stream_types: list[bytes]) -> None:
        data = self._data
        while pos + 8 <= end:
            fourcc, size = struct.unpack_from("<4sI", data, pos)
            payload_start = pos + 8
            payload_end = payload_start + size
            if fourcc == b"LIST":
                list_type = data[payload_start:payload_start + 4]
                if list_type in (b"hdrl", b"strl", b"movi", b"rec "):
                    self._walk(payload_start + 4, payload_end, stream_types)
            elif fourcc == b"strh":
                stream_types.append(data[payload_start:payload_start + 4])
                if stream_types[-1] == b"vids":
                    scale, rate = struct.unpack_from("<II", data, payload_start + 20)
                    if scale:
                        self.fps = rate / scale
            elif fourcc == b"strf":
                kind = stream_types[-1] if stream_types else b""
                if kind == b"vids":
                    (_, w, h, _, _, codec) = struct.unpack_from("<IiiHH4s", data, payload_start)
                    self.width, self.height = abs(w), abs(h)
                    self._video_codec = codec
                elif kind == b"auds":
                    fmt, ch, rate = struct.unpack_from("<HHI", data, payload_start)
                    if fmt != 1:
                        raise UnreadableMedia(f"{self.path}: unsupported audio format tag {fmt}")
                    self.audio_channels = ch
                    self.audio_rate = rate
            elif len(fourcc) == 4 and fourcc[2:4] in (b"dc", b"db"):
                self._frame_spans.append((payload_start, size))
            elif len(fourcc) == 4 and fourcc[2:4] == b"wb":
                self._audio_spans.append((payload_start, size))
            pos = payload_end + (size % 2)

    def read_frame(self, index: int) -> np.ndarray:
        """Decode frame ``index`` to an RGB uint8 array."""
        start, size = self._frame_spans[index]
        try:
            img = Image.open(io.BytesIO(self._data[start:start + size]))
            return np.asarray(img.convert("RGB"))
        except Exception as exc:
            raise FrameDecodeFailure(f"{self.path}: frame {index}: {exc}") from exc

    def iter_frames(self):
        for i in range(len(self._frame_spans)):
            yield self.read_frame(i)

    def read_audio(self) -> tuple[np.ndarray, int]:
        """Return (samples, rate); samples shape (n,) mono or (n, channels) int16."""
        raw = b"".join(self._data[s:s + n] for s, n in self._audio_spans)
        block = 2 * self.audio_channels
        raw = raw[:len(raw) - (len(raw) % block)] if block else b""
        arr = np.frombuffer(raw, dtype="<i2")
        if self.audio_channels > 1:
            arr = arr.reshape(-1, self.audio_channels)
        return arr, self.audio_rate

    def info(self) -> ContainerInfo:
        arr_len = sum(n for _, n in self._audio_spans) // (2 * self.audio_channels) \
            if self.audio_channels else 0
        return ContainerInfo(
            container="avi",
            has_video=self.has_video,
            has_audio=self.has_audio,
            width=self.width,
            height=self.height,
            fps=self.fps,
            frame_count=len(self._frame_spans),
            audio_rate=self.audio_rate,
            audio_channels=self.audio_channels,
            audio_sample_count=arr_len,
        )


def probe(path) -> ContainerInfo:
    """Identify a container and its streams.

    Raises UnreadableMedia for anything that is not a parseable AVI or WAV.
    """
    path = Path(path)
    if not path.is_file():
        raise UnreadableMedia(f"{path}: no such file")
    try:
        head = path.open("rb").read(12)
    except OSError as exc:
        raise UnreadableMedia(f"{path}: {exc}") from exc
    if len(head) >= 12 and head[:4] == b"RIFF" and head[8:12] == b"AVI ":
        return AviReader(path).info()
    if len(head) >= 12 and head[:4] == b"RIFF" and head[8:12] == b"WAVE":
        try:
            with wave.open(str(path), "rb") as wf:
                return ContainerInfo(
                    container="wav",
                    has_video=False,
                    has_audio=True,
                    audio_rate=wf.getframerate(),
                    audio_channels=wf.getnchannels(),
                    audio_sample_count=wf.getnframes(),
                )
        except wave.Error as exc:
            raise UnreadableMedia(f"{path}: bad WAV: {exc}") from exc
    raise UnreadableMedia(f"{path}: unrecognized container (RIFF AVI/WAV supported natively; "
                          f"configure an external transcoder for other formats)")
