"""Exposure to lateral collision from intersection occupancy grids."""

from ._lateral import (
    InvariantViolation,
    Layout,
    ParseError,
    ValidationError,
    ZoneMovementState,
    ZoneStats,
    detect,
    detect_groups,
    generate,
    load_layout,
    parse_layout,
    precision_recall,
    qualify_downstream,
    qualify_upstream,
    read_frames,
    score,
    write_frames,
    zone_stats,
)

__all__ = [
    "InvariantViolation",
    "Layout",
    "ParseError",
    "ValidationError",
    "ZoneMovementState",
    "ZoneStats",
    "detect",
    "detect_groups",
    "generate",
    "load_layout",
    "parse_layout",
    "precision_recall",
    "qualify_downstream",
    "qualify_upstream",
    "read_frames",
    "score",
    "write_frames",
    "zone_stats",
]
