"""Deterministic floor-plane detours around operator cylinders.

A blocked straight TCP leg is rerouted with via points placed on a
construction circle just outside the inflated obstacle: entry and exit at
the tangent angles, intermediate points every <= 30 degrees so that every
chord still clears the required radius. Side choice is by total path
length, ties go counterclockwise. No randomness anywhere: same inputs,
same detour.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

__all__ = ["InflatedDisc", "segment_clearance", "detour_segment", "replan_tcp_path"]

_ARC_STEP = math.pi / 6          # max angular spacing of via points
_PAD_MM = 0.5                    # construction pad so sampled clearance stays >= margin
_MAX_PASSES = 12


class InflatedDisc:
    """Floor-plane footprint of a cylinder grown by the detour margin."""

    def __init__(self, center, radius: float):
        self.center = np.asarray(center[:2], dtype=float)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("disc radius must be > 0")


def segment_clearance(a, b, center) -> float:
    """Minimum distance from segment a-b to a point, all floor-plane."""
    a = np.asarray(a[:2], dtype=float)
    b = np.asarray(b[:2], dtype=float)
    c = np.asarray(center[:2], dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(a - c)))
    t = float(np.clip((c - a) @ ab / denom, 0.0, 1.0))
    closest = a + t * ab
    return float(np.hypot(*(closest - c)))


def _blocking_disc(a, b, discs: Sequence[InflatedDisc]) -> Optional[InflatedDisc]:
    """First disc the segment cuts into, ordered by approach along the segment."""
    hits = []
    a2, b2 = np.asarray(a[:2], float), np.asarray(b[:2], float)
    ab = b2 - a2
    denom = float(ab @ ab)
    for disc in discs:
        if segment_clearance(a, b, disc.center) < disc.radius - 1e-9:
            t = 0.0 if denom == 0.0 else float(np.clip((disc.center - a2) @ ab / denom, 0.0, 1.0))
            hits.append((t, disc.center[0], disc.center[1], disc))
    if not hits:
        return None
    hits.sort(key=lambda h: (h[0], h[1], h[2]))
    return hits[0][3]


def _arc_points(center, radius: float, theta_from: float, theta_to: float,
                direction: int) -> list:
    """Points on the arc from theta_from to theta_to, spaced <= _ARC_STEP."""
    if direction > 0:
        span = (theta_to - theta_from) % (2.0 * math.pi)
    else:
        span = (theta_from - theta_to) % (2.0 * math.pi)
    n = max(int(math.ceil(span / _ARC_STEP)), 1)
    pts = []
    for k in range(n + 1):
        theta = theta_from + direction * span * k / n
        pts.append(center + radius * np.array([math.cos(theta), math.sin(theta)]))
    return pts


def detour_segment(a, b, disc: InflatedDisc, direction: int) -> Optional[list]:
    """Via points (2D) taking a->b around one disc on the given side.

    direction +1 walks the construction circle counterclockwise, -1
    clockwise. Returns None when either endpoint is engulfed.
    """
    a2 = np.asarray(a[:2], dtype=float)
    b2 = np.asarray(b[:2], dtype=float)
    c = disc.center
    da, db = np.hypot(*(a2 - c)), np.hypot(*(b2 - c))
    if da <= disc.radius or db <= disc.radius:
        return None
    r_build = (disc.radius + _PAD_MM) / math.cos(_ARC_STEP / 2.0)

    def entry_angle(p, dist, sign):
        alpha = math.atan2(p[1] - c[1], p[0] - c[0])
        if dist <= r_build:
            return alpha  # between obstacle and construction circle: enter radially
        return alpha + sign * math.acos(r_build / dist)

    theta_a = entry_angle(a2, da, direction)
    theta_b = entry_angle(b2, db, -direction)
    return _arc_points(c, r_build, theta_a, theta_b, direction)


def _path_length(points: Sequence[np.ndarray]) -> float:
    return float(sum(np.hypot(*(points[i + 1] - points[i])) for i in range(len(points) - 1)))


def _assign_heights(flat: Sequence[np.ndarray], z_from: float, z_to: float) -> list:
    """Lift a 2D polyline to 3D, interpolating z along cumulative length."""
    total = _path_length(flat)
    out = [np.array([flat[0][0], flat[0][1], z_from])]
    run = 0.0
    for i in range(1, len(flat)):
        run += float(np.hypot(*(flat[i] - flat[i - 1])))
        frac = run / total if total > 0 else 1.0
        out.append(np.array([flat[i][0], flat[i][1], z_from + (z_to - z_from) * frac]))
    return out


def replan_tcp_path(path: Sequence, cylinders, margin: float,
                    base_xy=(0.0, 0.0), reach_limit: float = float("inf")) -> Optional[list]:
    """Detour a 3D TCP polyline around cylinders inflated by `margin` mm.

    Returns the detoured path (original points preserved where clear) or
    None when no clearing path exists within `reach_limit` of the base.
    Only the floor-plane geometry is planned; via-point heights interpolate
    between the original leg endpoints.
    """
    pts3 = [np.asarray(p, dtype=float) for p in path]
    if any(p.shape != (3,) for p in pts3):
        raise ValueError("path points must be 3D")
    discs = [InflatedDisc((c.center[0], c.center[1]), c.radius + margin) for c in cylinders]
    base = np.asarray(base_xy, dtype=float)

    out = [pts3[0]]
    for i in range(len(pts3) - 1):
        leg = _plan_leg(pts3[i], pts3[i + 1], discs, base, reach_limit)
        if leg is None:
            return None
        out.extend(leg[1:])
    return out


def _leg_ok(points2, discs, base, reach_limit) -> bool:
    for p in points2[1:-1]:
        if np.hypot(*(p - base)) > reach_limit:
            return False
    for j in range(len(points2) - 1):
        for disc in discs:
            if segment_clearance(points2[j], points2[j + 1], disc.center) < disc.radius - 1e-9:
                return False
    return True


def _plan_leg(p_from, p_to, discs, base, reach_limit) -> Optional[list]:
    a2 = p_from[:2].copy()
    b2 = p_to[:2].copy()

    def expand(direction):
        pts = [a2, b2]
        for _ in range(_MAX_PASSES):
            blocked = None
            for j in range(len(pts) - 1):
                disc = _blocking_disc(pts[j], pts[j + 1], discs)
                if disc is not None:
                    blocked = (j, disc)
                    break
            if blocked is None:
                return pts
            j, disc = blocked
            vias = detour_segment(pts[j], pts[j + 1], disc, direction)
            if vias is None:
                return None
            pts = pts[: j + 1] + vias + pts[j + 1:]
        return None

    candidates = []
    for direction in (1, -1):
        pts = expand(direction)
        if pts is not None and _leg_ok(pts, discs, base, reach_limit):
            # length quantized to a nanometre so mirror-symmetric sides
            # compare equal and the tie resolves counterclockwise
            candidates.append((round(_path_length(pts), 6), -direction, pts))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (c[0], c[1]))
    return _assign_heights(candidates[0][2], float(p_from[2]), float(p_to[2]))
