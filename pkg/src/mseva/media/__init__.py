"""Media normalization: containers, resolution rules, frames, faces."""

from .faces import detect_faces, make_detector
from .prep import FramePolicy, extract_frames, normalize_container, probe_media
from .resolution import DEFAULT_RULES, ResolutionRule, select_resolution_rule, validate_rules
from .types import FaceCrop, FrameBatch, MediaAsset

__all__ = [
    "DEFAULT_RULES",
    "FaceCrop",
    "FrameBatch",
    "FramePolicy",
    "MediaAsset",
    "ResolutionRule",
    "detect_faces",
    "extract_frames",
    "make_detector",
    "normalize_container",
    "probe_media",
    "select_resolution_rule",
    "validate_rules",
]
