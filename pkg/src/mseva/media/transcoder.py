"""External transcoder invocation.

Media normalization shells out to a transcoder binary so that codec
support is a deployment concern. The argument contract is the ffmpeg
output-file syntax:

    <cmd> -y -i INPUT \
          -vn -ac 1 -ar 16000 -acodec pcm_s16le AUDIO.wav \
          -an -vf scale=W:H VIDEO.avi

Command resolution order: MSEVA_TRANSCODER env / config value, then
``ffmpeg`` on PATH, then the built-in reference transcoder
(``python -m mseva.media.ref_transcoder``), which covers RIFF AVI/WAV
inputs only.
"""
from __future__ import annotations

import shlex
import shutil
import subprocess
import sys

from ..errors import TranscoderFailure


def resolve_transcoder(configured: str = "") -> list[str]:
    if configured:
        return shlex.split(configured)
    ffmpeg = shutil.which("ffmpeg")
    if ffmpeg:
        return [ffmpeg]
    return [sys.executable, "-m", "mseva.media.ref_transcoder"]


def build_args(input_path, audio_out=None, video_out=None,
               dst_width: int = 0, dst_height: int = 0) -> list[str]:
    args = ["-y", "-i", str(input_path)]
    if audio_out is not None:
        args += ["-vn", "-ac", "1", "-ar", "16000", "-acodec", "pcm_s16le", str(audio_out)]
    if video_out is not None:
        args += ["-an", "-vf", f"scale={dst_width}:{dst_height}", str(video_out)]
    return args


def run_transcoder(command: list[str], args: list[str]) -> None:
    proc = subprocess.run(command + args, capture_output=True, text=True)
    if proc.returncode != 0:
        tail = (proc.stderr or proc.stdout or "").strip().splitlines()[-8:]
        raise TranscoderFailure(
            f"transcoder exited {proc.returncode}: {' '.join(command)}: " + " | ".join(tail))
