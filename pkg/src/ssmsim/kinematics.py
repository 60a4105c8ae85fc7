"""UR3 forward kinematics and joint-space routine interpolation.

The DH table is the manufacturer-published UR3 set (mm, rad). Forward
kinematics reports the elbow joint, the first wrist joint and the tool
center point in world coordinates; the interpolator advances a looping
joint-space waypoint routine at a commanded speed fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JointVector",
    "RobotGeometry",
    "ArmPoints",
    "UR3_GEOMETRY",
    "forward_kinematics",
    "normalize_joints",
    "JointPathInterpolator",
    "DEFAULT_ROUTINE",
    "NOMINAL_JOINT_SPEED_RAD_S",
]

JointVector = np.ndarray  # shape (6,), radians, each in (-pi, pi]

# Published UR3 DH parameters.
_UR3_A = (0.0, -243.65, -213.25, 0.0, 0.0, 0.0)
_UR3_D = (151.9, 0.0, 0.0, 112.35, 85.35, 81.9)
_UR3_ALPHA = (math.pi / 2, 0.0, 0.0, math.pi / 2, -math.pi / 2, 0.0)

# Nominal joint speed giving roughly a 1000 mm/s tool speed on the default
# routine, so a 0.5 fraction matches the 500 mm/s pre-stop robot speed.
NOMINAL_JOINT_SPEED_RAD_S = 3.55


@dataclass(frozen=True)
class RobotGeometry:
    """DH chain plus base placement and workspace radii (mm)."""

    a: tuple = _UR3_A
    d: tuple = _UR3_D
    alpha: tuple = _UR3_ALPHA
    base_position: tuple = (0.0, 0.0, 0.0)
    base_yaw: float = 0.0
    tool_length: float = 162.8  # flange to gripper tip
    reach: float = 500.0
    reach_with_tool: float = 662.8


UR3_GEOMETRY = RobotGeometry()


@dataclass(frozen=True)
class ArmPoints:
    """World positions (mm) of the frames the safety system watches."""

    elbow: np.ndarray
    wrist: np.ndarray
    tcp: np.ndarray


def normalize_joints(q) -> JointVector:
    """Wrap joint angles into (-pi, pi]; rejects non-finite input."""
    q = np.asarray(q, dtype=float)
    if q.shape != (6,):
        raise ValueError(f"expected 6 joint angles, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("joint angles must be finite")
    wrapped = np.mod(-q + math.pi, 2.0 * math.pi)
    return math.pi - wrapped


def _dh_matrix(theta: float, a: float, d: float, alpha: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array([
        [ct, -st * ca, st * sa, a * ct],
        [st, ct * ca, -ct * sa, a * st],
        [0.0, sa, ca, d],
        [0.0, 0.0, 0.0, 1.0],
    ])


def _base_transform(geom: RobotGeometry) -> np.ndarray:
    c, s = math.cos(geom.base_yaw), math.sin(geom.base_yaw)
    t = np.eye(4)
    t[:3, :3] = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    t[:3, 3] = geom.base_position
    return t


def _frames(geom: RobotGeometry, q: JointVector) -> list:
    t = _base_transform(geom)
    out = []
    for i in range(6):
        t = t @ _dh_matrix(q[i], geom.a[i], geom.d[i], geom.alpha[i])
        out.append(t)
    return out


def forward_kinematics(geom: RobotGeometry, q) -> ArmPoints:
    """Elbow, wrist-1 and TCP world positions for a joint vector.

    Elbow is the origin of the frame after the shoulder/upper-arm links,
    wrist the origin after the forearm link (the two joints that sweep the
    vertical working plane); TCP is the flange origin pushed out along the
    flange z-axis by the tool length.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (6,) or not np.all(np.isfinite(q)):
        raise ValueError("joint vector must be 6 finite angles")
    frames = _frames(geom, q)
    flange = frames[5]
    tcp = flange @ np.array([0.0, 0.0, geom.tool_length, 1.0])
    return ArmPoints(
        elbow=frames[1][:3, 3].copy(),
        wrist=frames[2][:3, 3].copy(),
        tcp=tcp[:3],
    )


# Default pick-and-place routine: swing between a pick side and a place side,
# dipping to table height at each end. Angles in radians.
def _pose(q1_deg: float, q2_deg: float, q3_deg: float, q4_deg: float) -> np.ndarray:
    return np.radians([q1_deg, q2_deg, q3_deg, q4_deg, -90.0, 0.0])


DEFAULT_ROUTINE = (
    _pose(-40.0, -100.0, 120.0, -130.0),   # pick, low
    _pose(-40.0, -115.0, 120.0, -120.0),   # pick, lifted
    _pose(40.0, -115.0, 120.0, -120.0),    # carry across
    _pose(40.0, -100.0, 120.0, -130.0),    # place, low
    _pose(40.0, -115.0, 120.0, -120.0),    # lift again
    _pose(-40.0, -115.0, 120.0, -120.0),   # return
)


class JointPathInterpolator:
    """Advances a looping joint-space waypoint routine.

    Each segment is traversed linearly; the pace is set by the largest joint
    excursion on the segment at `nominal_speed * fraction` rad/s. A zero
    fraction holds position and progress (category-2 stop semantics: state
    kept, resumable).
    """

    def __init__(self, waypoints, nominal_speed: float = NOMINAL_JOINT_SPEED_RAD_S,
                 loop: bool = True):
        pts = [np.asarray(w, dtype=float) for w in waypoints]
        if not pts:
            raise ValueError("waypoint list is empty")
        if any(p.shape != (6,) for p in pts):
            raise ValueError("waypoints must be 6-vectors")
        if nominal_speed <= 0:
            raise ValueError("nominal_speed must be > 0")
        self.waypoints = pts
        self.nominal_speed = float(nominal_speed)
        self.loop = loop
        self.segment = 0
        self.segment_progress = 0.0  # radians covered (max-joint metric)
        self.laps = 0
        self._q = pts[0].copy()
        self._total_length = sum(
            self._segment_length(i) for i in range(max(len(pts) - (0 if loop else 1), 0))
        )

    @property
    def joints(self) -> JointVector:
        return self._q.copy()

    @property
    def progress(self) -> float:
        """Path parameter: segment index plus in-segment fraction."""
        length = self._segment_length(self.segment)
        frac = self.segment_progress / length if length > 0 else 0.0
        return self.segment + min(frac, 1.0)

    def _segment_length(self, idx: int) -> float:
        a = self.waypoints[idx]
        b = self.waypoints[(idx + 1) % len(self.waypoints)]
        return float(np.max(np.abs(b - a)))

    def _num_segments(self) -> int:
        n = len(self.waypoints)
        return n if self.loop else n - 1

    def step(self, dt: float, speed_fraction: float) -> JointVector:
        """Advance by dt seconds at the given fraction; returns the new joints."""
        if dt <= 0:
            raise ValueError("dt must be > 0")
        if not 0.0 <= speed_fraction <= 1.0:
            raise ValueError("speed_fraction must be in [0, 1]")
        if len(self.waypoints) == 1 or self._num_segments() == 0 or self._total_length == 0.0:
            return self.joints
        budget = self.nominal_speed * speed_fraction * dt
        while budget > 0.0:
            length = self._segment_length(self.segment)
            remaining = length - self.segment_progress
            if budget < remaining:
                self.segment_progress += budget
                budget = 0.0
            else:
                budget -= remaining
                self.segment_progress = 0.0
                self.segment += 1
                if self.segment >= self._num_segments():
                    if self.loop:
                        self.segment = 0
                        self.laps += 1
                    else:
                        self.segment = self._num_segments() - 1
                        self.segment_progress = self._segment_length(self.segment)
                        break
        a = self.waypoints[self.segment]
        b = self.waypoints[(self.segment + 1) % len(self.waypoints)]
        length = self._segment_length(self.segment)
        frac = self.segment_progress / length if length > 0 else 1.0
        self._q = a + (b - a) * min(frac, 1.0)
        return self.joints
