"""Built-in reference transcoder for RIFF containers.

Implements the same argument contract as ffmpeg for the two outputs the
pipeline requests (see transcoder.py), so environments without ffmpeg can
still normalize AVI/WAV sources:

    python -m mseva.media.ref_transcoder -y -i in.avi \
        -vn -ac 1 -ar 16000 -acodec pcm_s16le out.wav \
        -an -vf scale=180:224 out.avi

Unsupported options or containers exit non-zero with a message on stderr.
"""
from __future__ import annotations

import sys
from pathlib import Path

import cv2
import numpy as np

from .. import audio as audio_io
from ..errors import MsevaError
from .riffavi import AviReader, AviWriter, probe


class _ArgError(Exception):
    pass


def _parse(argv: list[str]) -> dict:
    spec = {"input": None, "outputs": []}
    opts: dict = {}
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "-y":
            i += 1
        elif tok == "-i":
            spec["input"] = argv[i + 1]
            i += 2
        elif tok in ("-vn", "-an"):
            opts[tok] = True
            i += 1
        elif tok in ("-ac", "-ar", "-acodec", "-vf"):
            opts[tok] = argv[i + 1]
            i += 2
        elif tok.startswith("-"):
            raise _ArgError(f"unsupported option {tok}")
        else:
            spec["outputs"].append((tok, opts))
            opts = {}
            i += 1
    if spec["input"] is None or not spec["outputs"]:
        raise _ArgError("need -i INPUT and at least one output file")
    return spec


def _write_audio(src: Path, out: str, opts: dict) -> None:
    if opts.get("-acodec", "pcm_s16le") != "pcm_s16le":
        raise _ArgError(f"unsupported audio codec {opts['-acodec']}")
    channels = int(opts.get("-ac", 0))
    rate = int(opts.get("-ar", 0))
    if src.suffix.lower() == ".wav" or probe(src).container == "wav":
        samples, src_rate = audio_io.read_wav(src)
    else:
        reader = AviReader(src)
        if not reader.has_audio:
            raise _ArgError(f"{src}: no audio stream")
        raw, src_rate = reader.read_audio()
        samples = audio_io.int16_to_float(raw)
    if channels == 1:
        samples = audio_io.to_mono(samples)
    elif channels not in (0, 1):
        raise _ArgError(f"unsupported channel count {channels}")
    if rate:
        samples = audio_io.resample(samples, src_rate, rate)
    else:
        rate = src_rate
    audio_io.write_wav(out, samples, rate)


def _write_video(src: Path, out: str, opts: dict) -> None:
    vf = opts.get("-vf", "")
    if not vf.startswith("scale="):
        raise _ArgError(f"video output needs -vf scale=W:H, got {vf!r}")
    dst_w, dst_h = (int(v) for v in vf[len("scale="):].split(":"))
    reader = AviReader(src)
    if not reader.has_video:
        raise _ArgError(f"{src}: no video stream")
    with AviWriter(out, dst_w, dst_h, reader.fps) as writer:
        for frame in reader.iter_frames():
            scaled = cv2.resize(frame, (dst_w, dst_h), interpolation=cv2.INTER_AREA)
            writer.write_frame(np.ascontiguousarray(scaled))


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        spec = _parse(argv)
        src = Path(spec["input"])
        info = probe(src)
        for out, opts in spec["outputs"]:
            wants_video = "-vf" in opts and "-an" in opts
            if wants_video:
                if not info.has_video:
                    raise _ArgError(f"{src}: no video stream")
                _write_video(src, out, opts)
            else:
                if not info.has_audio:
                    raise _ArgError(f"{src}: no audio stream")
                _write_audio(src, out, opts)
        return 0
    except (_ArgError, MsevaError, OSError, ValueError) as exc:
        print(f"ref_transcoder: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
