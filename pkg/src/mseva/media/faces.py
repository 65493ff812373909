"""Face location adapters and crop extraction.

Three adapters share one protocol (detect(rgb) -> list of (x, y, w, h)):

* ``stub``     deterministic centered square, always fires;
* ``blob``     luminance-blob heuristic, fires on face-like bright regions;
* ``cascade``  OpenCV Haar cascade loaded from a configured XML path.

The model consumes at most one face stream, so detect_faces keeps only
the largest box per frame.
"""
from __future__ import annotations

import cv2
import numpy as np

from ..errors import DetectorUnavailable
from .types import FaceCrop, FrameBatch

CROP_SIZE = FaceCrop.CROP_SIZE


class CenterCropStub:
    """Always returns the centered square of side min(w, h)."""

    name = "stub"

    def detect(self, rgb: np.ndarray) -> list[tuple[int, int, int, int]]:
        h, w = rgb.shape[:2]
        side = min(w, h)
        return [((w - side) // 2, (h - side) // 2, side, side)]


class BlobFaceDetector:
    """Finds the largest bright, roughly face-proportioned blob.

    Deterministic and weight-free; intended for fixtures and as a
    conservative fallback, not as a production face detector.
    """

    name = "blob"

    # component filters relative to frame area / box shape
    MIN_AREA_FRAC = 0.01
    MAX_AREA_FRAC = 0.60
    ASPECT_RANGE = (0.6, 2.4)  # h / w

    def detect(self, rgb: np.ndarray) -> list[tuple[int, int, int, int]]:
        gray = cv2.cvtColor(rgb, cv2.COLOR_RGB2GRAY)
        if int(gray.max()) - int(gray.min()) < 16:
            return []  # flat frame: nothing to segment
        _, mask = cv2.threshold(gray, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
        count, _, stats, _ = cv2.connectedComponentsWithStats(mask, connectivity=8)
        frame_area = gray.shape[0] * gray.shape[1]
        best = None
        for label in range(1, count):
            x, y, w, h, area = stats[label]
            if not (self.MIN_AREA_FRAC * frame_area <= area <= self.MAX_AREA_FRAC * frame_area):
                continue
            aspect = h / w if w else 0.0
            if not (self.ASPECT_RANGE[0] <= aspect <= self.ASPECT_RANGE[1]):
                continue
            if best is None or area > best[4]:
                best = (x, y, w, h, area)
        return [tuple(int(v) for v in best[:4])] if best else []


class CascadeFaceDetector:
    """Haar cascade adapter; the XML file ships with full OpenCV installs."""

    name = "cascade"

    def __init__(self, cascade_path: str):
        if not cascade_path:
            raise DetectorUnavailable("no cascade path configured "
                                      "(set MSEVA_FACE_CASCADE or media.face_cascade_path)")
        self._cascade = cv2.CascadeClassifier(cascade_path)
        if self._cascade.empty():
            raise DetectorUnavailable(f"could not load cascade from {cascade_path}")

    def detect(self, rgb: np.ndarray) -> list[tuple[int, int, int, int]]:
        gray = cv2.cvtColor(rgb, cv2.COLOR_RGB2GRAY)
        boxes = self._cascade.detectMultiScale(gray, scaleFactor=1.1, minNeighbors=4)
        return [tuple(int(v) for v in box) for box in boxes]


def make_detector(kind: str, cascade_path: str = "", fallback_to_stub: bool = True):
    """Build the configured detector; optionally degrade to the stub."""
    try:
        if kind == "stub":
            return CenterCropStub()
        if kind == "blob":
            return BlobFaceDetector()
        if kind == "cascade":
            return CascadeFaceDetector(cascade_path)
        raise DetectorUnavailable(f"unknown face detector {kind!r}")
    except DetectorUnavailable:
        if fallback_to_stub and kind != "stub":
            return CenterCropStub()
        raise


def detect_faces(batch: FrameBatch, detector) -> list[FaceCrop]:
    """At most one 48x48 crop per frame (largest detected box)."""
    crops = []
    for t, frame in zip(batch.timestamps_ms, batch.frames):
        boxes = detector.detect(frame)
        if not boxes:
            continue
        x, y, w, h = max(boxes, key=lambda b: b[2] * b[3])
        fh, fw = frame.shape[:2]
        x, y = max(0, x), max(0, y)
        w, h = min(w, fw - x), min(h, fh - y)
        if w <= 0 or h <= 0:
            continue
        region = frame[y:y + h, x:x + w]
        crop = cv2.resize(region, (CROP_SIZE, CROP_SIZE), interpolation=cv2.INTER_AREA)
        crops.append(FaceCrop(frame_timestamp_ms=t, bbox=(x, y, w, h),
                              crop=np.ascontiguousarray(crop)))
    return crops
