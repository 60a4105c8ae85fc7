"""Separation-distance math and risk-graph lookup for a collaborative cell.

All distances are millimetres, all times seconds. Functions here are pure
and stateless; they are the single source of truth for zone boundaries used
by the monitor, the simulator and the CLI.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "StandardViolationError",
    "SsmParameters",
    "ZoneBoundaries",
    "SafetyZone",
    "Severity",
    "Frequency",
    "Avoidability",
    "HazardProperties",
    "PerformanceLevel",
    "compute_msd",
    "compute_zone_boundaries",
    "classify_zone",
    "collision_time",
    "performance_level",
    "MIN_CLEARANCE_MM",
    "DEFAULT_CLEARANCE_MM",
]

# ISO/TS 15066 requires at least 500 mm of clearance between the inner stop
# boundary and the outer warning boundary; 750 mm is the installed default.
MIN_CLEARANCE_MM = 500.0
DEFAULT_CLEARANCE_MM = 750.0


class StandardViolationError(ValueError):
    """A requested configuration falls below a normative minimum."""


def _require_finite_nonneg(name: str, value: float) -> float:
    v = float(value)
    if not math.isfinite(v) or v < 0.0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return v


@dataclass(frozen=True)
class SsmParameters:
    """Inputs of the minimum-separation-distance formula.

    v_h: walking speed of an approaching person, mm/s (1600 per ISO 13855).
    v_r: robot speed before the stop is issued, mm/s.
    t_r: system reaction time, s.
    t_s: robot stop time, s.
    c_intrusion, z_d, z_r: sensor intrusion distance and position
        uncertainties, mm. Zero by default; kept configurable because the
        general formula includes them.
    """

    v_h: float = 1600.0
    v_r: float = 500.0
    t_r: float = 0.0283
    t_s: float = 0.4
    c_intrusion: float = 0.0
    z_d: float = 0.0
    z_r: float = 0.0

    def __post_init__(self) -> None:
        for name in ("v_h", "v_r", "t_r", "t_s", "c_intrusion", "z_d", "z_r"):
            _require_finite_nonneg(name, getattr(self, name))


@dataclass(frozen=True)
class ZoneBoundaries:
    """Inner (stop) and outer (slow-down) circle radii around the robot base."""

    s_a: float
    s_b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s_a) and math.isfinite(self.s_b)):
            raise ValueError("zone boundaries must be finite")
        if not 0.0 < self.s_a < self.s_b:
            raise ValueError(f"need 0 < s_a < s_b, got s_a={self.s_a}, s_b={self.s_b}")

    @property
    def clearance(self) -> float:
        return self.s_b - self.s_a


class SafetyZone(enum.IntEnum):
    """Distance-ordered zones; lower value means closer to the robot."""

    HIGH_RISK = 0
    LOW_RISK = 1
    SAFE = 2

    @property
    def label(self) -> str:
        return _ZONE_LABELS[self]


_ZONE_LABELS = {
    SafetyZone.HIGH_RISK: "high_risk",
    SafetyZone.LOW_RISK: "low_risk",
    SafetyZone.SAFE: "safe",
}

ZONE_BY_LABEL = {v: k for k, v in _ZONE_LABELS.items()}


def compute_msd(params: SsmParameters) -> float:
    """Minimum separation distance in mm.

    Sum of the distance the person covers during reaction + stop, the
    distance the robot covers while reacting, half the stop travel, and the
    sensor allowances. Defaults evaluate to 799.43 mm.
    """
    p = params
    return (
        p.v_h * (p.t_r + p.t_s)
        + p.v_r * p.t_r
        + p.v_r * p.t_s / 2.0
        + p.c_intrusion
        + p.z_d
        + p.z_r
    )


def compute_zone_boundaries(
    params: SsmParameters, clearance: float = DEFAULT_CLEARANCE_MM
) -> ZoneBoundaries:
    """Boundaries with the outer circle `clearance` mm beyond the inner one."""
    clearance = float(clearance)
    if not math.isfinite(clearance) or clearance < MIN_CLEARANCE_MM:
        raise StandardViolationError(
            f"clearance must be >= {MIN_CLEARANCE_MM:.0f} mm, got {clearance!r}"
        )
    s_a = compute_msd(params)
    return ZoneBoundaries(s_a=s_a, s_b=s_a + clearance)


def classify_zone(distance: float, bounds: ZoneBoundaries) -> SafetyZone:
    """Zone for a horizontal distance from the robot base.

    Boundaries are inclusive on the riskier side: distance == s_a is
    HIGH_RISK, distance == s_b is LOW_RISK.
    """
    d = float(distance)
    if not math.isfinite(d) or d < 0.0:
        raise ValueError(f"distance must be finite and >= 0, got {distance!r}")
    if d <= bounds.s_a:
        return SafetyZone.HIGH_RISK
    if d <= bounds.s_b:
        return SafetyZone.LOW_RISK
    return SafetyZone.SAFE


def collision_time(margin: float, v_h: float) -> float:
    """Seconds for a person walking at v_h to cover `margin` millimetres."""
    m = _require_finite_nonneg("margin", margin)
    v = float(v_h)
    if not math.isfinite(v) or v <= 0.0:
        raise ValueError(f"v_h must be finite and > 0, got {v_h!r}")
    return m / v


class Severity(enum.Enum):
    S1 = "S1"  # slight, normally reversible injury
    S2 = "S2"  # severe, normally irreversible injury


class Frequency(enum.Enum):
    F1 = "F1"  # rare exposure
    F2 = "F2"  # frequent or constant exposure


class Avoidability(enum.Enum):
    P1 = "P1"  # avoidance possible under certain conditions
    P2 = "P2"  # avoidance scarcely possible


@dataclass(frozen=True)
class HazardProperties:
    severity: Severity = Severity.S1
    frequency: Frequency = Frequency.F2
    avoidability: Avoidability = Avoidability.P2


class PerformanceLevel(enum.IntEnum):
    """Required risk-reduction grade, ordered PLa (lowest) to PLe."""

    PLa = 0
    PLb = 1
    PLc = 2
    PLd = 3
    PLe = 4


# Risk graph: each S/F/P choice takes one step down the ladder.
_RISK_GRAPH = {
    (Severity.S1, Frequency.F1, Avoidability.P1): PerformanceLevel.PLa,
    (Severity.S1, Frequency.F1, Avoidability.P2): PerformanceLevel.PLb,
    (Severity.S1, Frequency.F2, Avoidability.P1): PerformanceLevel.PLb,
    (Severity.S1, Frequency.F2, Avoidability.P2): PerformanceLevel.PLc,
    (Severity.S2, Frequency.F1, Avoidability.P1): PerformanceLevel.PLc,
    (Severity.S2, Frequency.F1, Avoidability.P2): PerformanceLevel.PLd,
    (Severity.S2, Frequency.F2, Avoidability.P1): PerformanceLevel.PLd,
    (Severity.S2, Frequency.F2, Avoidability.P2): PerformanceLevel.PLe,
}


def performance_level(hazard: HazardProperties) -> PerformanceLevel:
    """Required performance level from the risk graph. Total over all 8 inputs."""
    return _RISK_GRAPH[(hazard.severity, hazard.frequency, hazard.avoidability)]
