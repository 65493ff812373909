"""Resolution mapping for the video compression strategy.

Short videos arrive in a handful of source resolutions; each known range
maps to a fixed target that keeps face crops at training-time scale.
Inputs outside every range fall back to scaling the longer side to 224
with aspect preserved.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import AmbiguousRules, ConfigError

FALLBACK_LONG_SIDE = 224


@dataclass(frozen=True)
class ResolutionRule:
    """Maps a source width/height range (inclusive) to a target size."""

    src_width_range: tuple[int, int]
    src_height_range: tuple[int, int]
    dst_width: int
    dst_height: int

    def matches(self, width: int, height: int) -> bool:
        return (self.src_width_range[0] <= width <= self.src_width_range[1]
                and self.src_height_range[0] <= height <= self.src_height_range[1])


# The four stock ranges, width x height.
DEFAULT_RULES = (
    ResolutionRule((470, 490), (550, 570), 180, 224),
    ResolutionRule((845, 865), (470, 490), 214, 120),
    ResolutionRule((470, 490), (840, 860), 120, 214),
    ResolutionRule((1070, 1090), (1910, 1930), 144, 216),
)


def _range_orientation(rule: ResolutionRule) -> str:
    """'portrait' if every (w, h) in the box has w < h; 'landscape' if w > h."""
    w_lo, w_hi = rule.src_width_range
    h_lo, h_hi = rule.src_height_range
    if w_hi < h_lo:
        return "portrait"
    if w_lo > h_hi:
        return "landscape"
    return "mixed"


def validate_rules(rules) -> None:
    """Reject empty ranges, orientation flips, and overlapping rules."""
    for rule in rules:
        for lo, hi in (rule.src_width_range, rule.src_height_range):
            if lo > hi or lo <= 0:
                raise ConfigError(f"empty or non-positive source range in {rule}")
        if rule.dst_width <= 0 or rule.dst_height <= 0:
            raise ConfigError(f"non-positive target size in {rule}")
        src_orient = _range_orientation(rule)
        dst_orient = ("portrait" if rule.dst_width < rule.dst_height
                      else "landscape" if rule.dst_width > rule.dst_height else "square")
        if src_orient == "mixed":
            raise ConfigError(f"source range mixes orientations in {rule}")
        if src_orient != dst_orient:
            raise ConfigError(f"rule flips orientation ({src_orient} -> {dst_orient}): {rule}")
    for i, a in enumerate(rules):
        for b in rules[i + 1:]:
            if (_ranges_overlap(a.src_width_range, b.src_width_range)
                    and _ranges_overlap(a.src_height_range, b.src_height_range)):
                raise AmbiguousRules(f"rules overlap: {a} vs {b}")


def _ranges_overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def fallback_rule(width: int, height: int) -> ResolutionRule:
    """Scale the longer side to 224, preserving aspect ratio."""
    if width >= height:
        dst_w = FALLBACK_LONG_SIDE
        dst_h = max(1, int(round(height * FALLBACK_LONG_SIDE / width)))
    else:
        dst_h = FALLBACK_LONG_SIDE
        dst_w = max(1, int(round(width * FALLBACK_LONG_SIDE / height)))
    return ResolutionRule((width, width), (height, height), dst_w, dst_h)


def select_resolution_rule(width: int, height: int, rules=DEFAULT_RULES) -> ResolutionRule:
    """Return the unique matching rule, or the aspect-preserving fallback."""
    matching = [r for r in rules if r.matches(width, height)]
    if len(matching) > 1:
        raise AmbiguousRules(f"{len(matching)} rules match {width}x{height}: {matching}")
    if matching:
        return matching[0]
    return fallback_rule(width, height)
