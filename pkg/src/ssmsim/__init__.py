"""Barrierless human-robot safety cell: separation monitoring in a deterministic simulator."""

from .safety import (SafetyZone, SsmParameters, ZoneBoundaries, classify_zone,
                     collision_time, compute_msd, compute_zone_boundaries,
                     performance_level)

__version__ = "0.1.0"

__all__ = [
    "SafetyZone",
    "SsmParameters",
    "ZoneBoundaries",
    "classify_zone",
    "collision_time",
    "compute_msd",
    "compute_zone_boundaries",
    "performance_level",
    "__version__",
]
