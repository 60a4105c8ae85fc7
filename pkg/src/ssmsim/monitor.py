"""Decision core: pick the governing operator, classify zones, emit speed commands.

Three operation modes share the same outer-zone behavior (full speed when
everyone is safe, half speed in the warning band) and differ in how they
treat the inner zone: stop outright, stop only near the moving joints, or
slow to a crawl and replan around the person.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .safety import SafetyZone, ZoneBoundaries, classify_zone

__all__ = [
    "OperationMode",
    "OperatorEstimate",
    "SpeedCommand",
    "CollisionCylinder",
    "make_operator_estimate",
    "governing_operator",
    "static_ssm_command",
    "dynamic_zones_command",
    "obstacle_avoidance_command",
    "command_for_mode",
    "update_collision_set",
    "DEFAULT_JOINT_MSD_MM",
    "DEFAULT_CYLINDER_RADIUS_MM",
]

DEFAULT_JOINT_MSD_MM = 200.0        # stop radius around wrist and elbow
DEFAULT_CYLINDER_RADIUS_MM = 300.0  # collision-object radius (~shoulder width)

FULL_SPEED = 1.0
LOW_RISK_SPEED = 0.5
DYNAMIC_HIGH_RISK_SPEED = 0.25
AVOIDANCE_HIGH_RISK_SPEED = 0.1


class OperationMode(enum.Enum):
    STATIC_SSM = "static_ssm"
    DYNAMIC_ZONES = "dynamic_zones"
    OBSTACLE_AVOIDANCE = "obstacle_avoidance"


@dataclass(frozen=True)
class OperatorEstimate:
    """A tracked person as the monitor sees them."""

    track_id: int
    position: tuple       # floor-plane (x, y), mm
    height: float
    zone: SafetyZone
    distance_to_base: float


@dataclass(frozen=True)
class SpeedCommand:
    fraction: float
    stop: bool = False
    replan_required: bool = False
    governing_operator: Optional[int] = None

    def __post_init__(self) -> None:
        if self.stop and self.fraction != 0.0:
            raise ValueError("a stop command must carry fraction 0")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")


@dataclass(frozen=True)
class CollisionCylinder:
    track_id: int
    center: tuple     # floor (x, y), mm
    radius: float
    height: float
    zone: SafetyZone


def make_operator_estimate(track_id: int, position, height: float,
                           bounds: ZoneBoundaries, base_xy) -> OperatorEstimate:
    """Build an estimate, deriving base distance and zone from the position."""
    dx = position[0] - base_xy[0]
    dy = position[1] - base_xy[1]
    dist = math.hypot(dx, dy)
    return OperatorEstimate(
        track_id=track_id,
        position=(float(position[0]), float(position[1])),
        height=float(height),
        zone=classify_zone(dist, bounds),
        distance_to_base=dist,
    )


def governing_operator(operators: Sequence[OperatorEstimate]) -> Optional[OperatorEstimate]:
    """Closest operator to the base; ties go to the lowest track id."""
    if not operators:
        return None
    return min(operators, key=lambda o: (o.distance_to_base, o.track_id))


def static_ssm_command(operators: Sequence[OperatorEstimate],
                       bounds: ZoneBoundaries) -> SpeedCommand:
    """Full / half / protective-stop by the governing operator's zone."""
    gov = governing_operator(operators)
    if gov is None:
        return SpeedCommand(FULL_SPEED)
    if gov.zone == SafetyZone.SAFE:
        return SpeedCommand(FULL_SPEED, governing_operator=gov.track_id)
    if gov.zone == SafetyZone.LOW_RISK:
        return SpeedCommand(LOW_RISK_SPEED, governing_operator=gov.track_id)
    return SpeedCommand(0.0, stop=True, governing_operator=gov.track_id)


def dynamic_zones_command(operators: Sequence[OperatorEstimate],
                          bounds: ZoneBoundaries, elbow, wrist,
                          joint_msd: float = DEFAULT_JOINT_MSD_MM) -> SpeedCommand:
    """Quarter speed in the inner zone; stop only within joint_msd of a joint.

    Joint distances are horizontal: operator floor position against the
    (x, y) of the wrist and elbow. The boundary is inclusive — exactly
    joint_msd away still stops.
    """
    gov = governing_operator(operators)
    if gov is None:
        return SpeedCommand(FULL_SPEED)
    if gov.zone == SafetyZone.SAFE:
        return SpeedCommand(FULL_SPEED, governing_operator=gov.track_id)
    if gov.zone == SafetyZone.LOW_RISK:
        return SpeedCommand(LOW_RISK_SPEED, governing_operator=gov.track_id)
    for op in operators:
        d_wrist = math.hypot(op.position[0] - wrist[0], op.position[1] - wrist[1])
        d_elbow = math.hypot(op.position[0] - elbow[0], op.position[1] - elbow[1])
        if min(d_wrist, d_elbow) <= joint_msd:
            return SpeedCommand(0.0, stop=True, governing_operator=gov.track_id)
    return SpeedCommand(DYNAMIC_HIGH_RISK_SPEED, governing_operator=gov.track_id)


def obstacle_avoidance_command(operators: Sequence[OperatorEstimate],
                               bounds: ZoneBoundaries) -> SpeedCommand:
    """Crawl and replan instead of stopping; never emits a stop."""
    gov = governing_operator(operators)
    if gov is None:
        return SpeedCommand(FULL_SPEED)
    if gov.zone == SafetyZone.SAFE:
        return SpeedCommand(FULL_SPEED, governing_operator=gov.track_id)
    if gov.zone == SafetyZone.LOW_RISK:
        return SpeedCommand(LOW_RISK_SPEED, governing_operator=gov.track_id)
    return SpeedCommand(AVOIDANCE_HIGH_RISK_SPEED, replan_required=True,
                        governing_operator=gov.track_id)


def command_for_mode(mode: OperationMode, operators: Sequence[OperatorEstimate],
                     bounds: ZoneBoundaries, elbow=None, wrist=None,
                     joint_msd: float = DEFAULT_JOINT_MSD_MM) -> SpeedCommand:
    if mode == OperationMode.STATIC_SSM:
        return static_ssm_command(operators, bounds)
    if mode == OperationMode.DYNAMIC_ZONES:
        if elbow is None or wrist is None:
            raise ValueError("dynamic zones mode needs elbow and wrist positions")
        return dynamic_zones_command(operators, bounds, elbow, wrist, joint_msd)
    if mode == OperationMode.OBSTACLE_AVOIDANCE:
        return obstacle_avoidance_command(operators, bounds)
    raise ValueError(f"unknown mode {mode!r}")


def update_collision_set(operators: Sequence[OperatorEstimate],
                         radius: float = DEFAULT_CYLINDER_RADIUS_MM) -> list:
    """One cylinder per reported operator, colored by zone.

    Rebuilt from scratch every frame, so cylinders of vanished tracks
    disappear with their track.
    """
    if radius <= 0:
        raise ValueError("cylinder radius must be > 0")
    return [
        CollisionCylinder(
            track_id=op.track_id,
            center=op.position,
            radius=float(radius),
            height=op.height,
            zone=op.zone,
        )
        for op in operators
    ]
