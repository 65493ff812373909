"""WAV I/O and sample-format helpers.

The pipeline's canonical audio form is mono float32 in [-1, 1] at
16 000 samples/s; files on disk are 16-bit PCM WAV.
"""
from __future__ import annotations

import math
import wave
from pathlib import Path

import numpy as np
from scipy.signal import resample_poly

from .errors import UnreadableMedia

TARGET_RATE = 16_000
SAMPLES_PER_MS = TARGET_RATE // 1000


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a 16-bit PCM WAV; returns (float32 samples, rate).

    Shape is (n,) for mono, (n, channels) otherwise.
    """
    try:
        with wave.open(str(path), "rb") as wf:
            if wf.getsampwidth() != 2:
                raise UnreadableMedia(f"{path}: only 16-bit PCM WAV is supported")
            rate = wf.getframerate()
            channels = wf.getnchannels()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise UnreadableMedia(f"{path}: bad WAV: {exc}") from exc
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float32) / 32768.0
    if channels > 1:
        samples = samples.reshape(-1, channels)
    return samples, rate


def write_wav(path, samples: np.ndarray, rate: int) -> None:
    """Write float or int16 samples as 16-bit PCM WAV (pcm_s16le)."""
    arr = np.asarray(samples)
    if arr.dtype != np.int16:
        arr = float_to_int16(arr)
    channels = 1 if arr.ndim == 1 else arr.shape[1]
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(channels)
        wf.setsampwidth(2)
        wf.setframerate(rate)
        wf.writeframes(arr.astype("<i2").tobytes())


def float_to_int16(samples: np.ndarray) -> np.ndarray:
    return np.clip(np.round(np.asarray(samples, dtype=np.float64) * 32768.0),
                   -32768, 32767).astype(np.int16)


def int16_to_float(samples: np.ndarray) -> np.ndarray:
    return np.asarray(samples, dtype=np.float32) / 32768.0


def to_mono(samples: np.ndarray) -> np.ndarray:
    """Downmix (n, channels) to (n,) by channel mean; mono passes through."""
    arr = np.asarray(samples)
    if arr.ndim == 1:
        return arr
    return arr.mean(axis=1).astype(arr.dtype if arr.dtype.kind == "f" else np.float32)


def resample(samples: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    """Polyphase resampling; identity when rates match."""
    if src_rate == dst_rate:
        return np.asarray(samples)
    g = math.gcd(src_rate, dst_rate)
    out = resample_poly(np.asarray(samples, dtype=np.float64), dst_rate // g, src_rate // g)
    return out.astype(np.float32)


def normalize_samples(samples: np.ndarray, src_rate: int) -> np.ndarray:
    """Downmix + resample to the canonical mono 16 kHz float32 form."""
    mono = to_mono(int16_to_float(samples) if samples.dtype == np.int16 else samples)
    return np.asarray(resample(mono, src_rate, TARGET_RATE), dtype=np.float32)


def duration_ms(samples: np.ndarray, rate: int = TARGET_RATE) -> int:
    return int(round(len(samples) * 1000.0 / rate))


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
