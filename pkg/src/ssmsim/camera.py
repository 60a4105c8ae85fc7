"""Pinhole camera model for the ceiling-mounted depth sensor.

Maps between world coordinates (mm) and (pixel, depth) observations, and
turns head detections into operator floor positions and heights. No lens
distortion; the pipeline is synthetic end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CameraModel", "Detection", "default_camera",
           "pixel_depth_to_world", "world_to_pixel", "estimate_operator"]

# Default mounting: 3450 mm above the floor, optical axis straight down,
# footprint 4200 x 3100 mm on the floor with a 640x480 image.
DEFAULT_MOUNT_HEIGHT_MM = 3450.0
DEFAULT_IMAGE_WIDTH = 640
DEFAULT_IMAGE_HEIGHT = 480
DEFAULT_FOOTPRINT_MM = (4200.0, 3100.0)

# Camera frame -> world for a straight-down camera: +x_cam = +x_world,
# +y_cam = -y_world, +z_cam (optical axis) = -z_world.
_DOWNWARD_ROTATION = ((1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0))


@dataclass(frozen=True)
class CameraModel:
    """Intrinsics plus a rigid camera->world transform (rotation, translation mm)."""

    fx: float
    fy: float
    cx: float
    cy: float
    rotation: tuple = _DOWNWARD_ROTATION
    translation: tuple = (0.0, 0.0, DEFAULT_MOUNT_HEIGHT_MM)
    image_width: int = DEFAULT_IMAGE_WIDTH
    image_height: int = DEFAULT_IMAGE_HEIGHT
    mount_height: float = DEFAULT_MOUNT_HEIGHT_MM

    def __post_init__(self) -> None:
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx <= self.image_width and 0 <= self.cy <= self.image_height):
            raise ValueError("principal point must lie inside the image")
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (3, 3) or abs(np.linalg.det(r) - 1.0) > 1e-6:
            raise ValueError("rotation must be a proper 3x3 rotation matrix")

    @property
    def r(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float)

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=float)

    def contains_pixel(self, u: float, v: float) -> bool:
        return 0.0 <= u <= self.image_width and 0.0 <= v <= self.image_height


@dataclass(frozen=True)
class Detection:
    """Axis-aligned head box in pixels plus depth along the optical axis, mm."""

    bbox: tuple  # (u_min, v_min, u_max, v_max)
    depth: float
    confidence: float = 1.0

    def __post_init__(self) -> None:
        u0, v0, u1, v1 = self.bbox
        if not (u0 < u1 and v0 < v1):
            raise ValueError(f"degenerate bbox {self.bbox}")
        if self.depth <= 0:
            raise ValueError(f"depth must be > 0, got {self.depth}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")

    @property
    def center(self) -> tuple:
        u0, v0, u1, v1 = self.bbox
        return ((u0 + u1) / 2.0, (v0 + v1) / 2.0)


def default_camera(position_xy=(0.0, 0.0),
                   mount_height: float = DEFAULT_MOUNT_HEIGHT_MM) -> CameraModel:
    """Straight-down camera whose floor footprint is 4200 x 3100 mm.

    fx is chosen so the image width spans the footprint width at floor level
    (fx = image_width * mount_height / footprint_width), same for fy.
    """
    fw, fh = DEFAULT_FOOTPRINT_MM
    return CameraModel(
        fx=DEFAULT_IMAGE_WIDTH * mount_height / fw,
        fy=DEFAULT_IMAGE_HEIGHT * mount_height / fh,
        cx=DEFAULT_IMAGE_WIDTH / 2.0,
        cy=DEFAULT_IMAGE_HEIGHT / 2.0,
        translation=(float(position_xy[0]), float(position_xy[1]), mount_height),
        mount_height=mount_height,
    )


def pixel_depth_to_world(camera: CameraModel, u: float, v: float, depth: float) -> np.ndarray:
    """Back-project pixel (u, v) at `depth` mm along the optical axis to world."""
    if depth <= 0:
        raise ValueError(f"depth must be > 0, got {depth}")
    x_cam = (u - camera.cx) / camera.fx * depth
    y_cam = (v - camera.cy) / camera.fy * depth
    p_cam = np.array([x_cam, y_cam, depth])
    return camera.r @ p_cam + camera.t


def world_to_pixel(camera: CameraModel, point) -> tuple:
    """Project a world point; returns (u, v, depth). Depth is z in camera frame."""
    p_cam = camera.r.T @ (np.asarray(point, dtype=float) - camera.t)
    z = p_cam[2]
    if z <= 0:
        raise ValueError(f"point {point} is behind the camera (z_cam={z:.1f})")
    u = camera.fx * p_cam[0] / z + camera.cx
    v = camera.fy * p_cam[1] / z + camera.cy
    return u, v, z


def estimate_operator(camera: CameraModel, det: Detection) -> tuple:
    """Floor position (x, y) mm and height mm from a head detection.

    The ray through the box center is scaled to the measured depth; the head
    point's (x, y) is taken as the floor position and its z as the standing
    height. A head below floor level means the depth reading is inconsistent
    with the mounting and is rejected.
    """
    u, v = det.center
    head = pixel_depth_to_world(camera, u, v, det.depth)
    height = head[2]
    if height < -1e-9:
        raise ValueError(
            f"depth {det.depth:.1f} mm puts the head {-height:.1f} mm below the floor"
        )
    return np.array([head[0], head[1]]), max(height, 0.0)
