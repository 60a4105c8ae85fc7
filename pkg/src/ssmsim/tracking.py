"""SORT-style multi-object tracker over head bounding boxes.

Constant-velocity Kalman filter per track in (center, area, aspect) space,
IoU data association solved as an optimal assignment, and hit/miss track
lifecycle. Depth is not filtered; the last matched depth rides along with
the track.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["TrackerConfig", "Track", "SortTracker", "TrackReport", "iou", "associate"]


@dataclass(frozen=True)
class TrackerConfig:
    max_misses: int = 3      # frames a track may coast before deletion
    min_hits: int = 1        # consecutive matches before a track is reported
    iou_threshold: float = 0.3

    def __post_init__(self) -> None:
        if self.max_misses < 1 or self.min_hits < 1:
            raise ValueError("max_misses and min_hits must be >= 1")
        if not 0.0 <= self.iou_threshold <= 1.0:
            raise ValueError("iou_threshold must be in [0, 1]")


@dataclass(frozen=True)
class TrackReport:
    track_id: int
    bbox: tuple
    depth: float
    coasting: bool
    source_step: int


def iou(a, b) -> float:
    """Intersection over union of two (u0, v0, u1, v1) boxes; degenerate -> 0."""
    iw = min(a[2], b[2]) - max(a[0], b[0])
    ih = min(a[3], b[3]) - max(a[1], b[1])
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = ((a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter)
    if union <= 0:
        return 0.0
    return inter / union


def _bbox_to_z(bbox) -> np.ndarray:
    u0, v0, u1, v1 = bbox
    w, h = u1 - u0, v1 - v0
    return np.array([u0 + w / 2.0, v0 + h / 2.0, w * h, w / h])


def _z_to_bbox(z) -> tuple:
    u, v, s, r = z[0], z[1], max(z[2], 1e-6), max(z[3], 1e-6)
    w = np.sqrt(s * r)
    h = s / w
    return (u - w / 2.0, v - h / 2.0, u + w / 2.0, v + h / 2.0)


# Constant-velocity model on (u, v, s); aspect ratio has no velocity.
_F = np.eye(7)
_F[0, 4] = _F[1, 5] = _F[2, 6] = 1.0
_H = np.zeros((4, 7))
_H[:4, :4] = np.eye(4)
# Reference SORT noise magnitudes.
_R = np.diag([1.0, 1.0, 10.0, 10.0])
_P0 = np.diag([10.0, 10.0, 10.0, 10.0, 1e4, 1e4, 1e4])
_Q = np.diag([1.0, 1.0, 1.0, 1.0, 0.01, 0.01, 1e-4])


class Track:
    """One tracked head box with its Kalman state and lifecycle counters."""

    def __init__(self, track_id: int, bbox, depth: float, source_step: int):
        self.id = track_id
        self.mean = np.zeros(7)
        self.mean[:4] = _bbox_to_z(bbox)
        self.covariance = _P0.copy()
        self.age = 0
        self.hits = 1        # consecutive matched frames
        self.misses = 0      # consecutive unmatched frames
        self.depth = float(depth)
        self.confirmed = False
        self.last_source_step = source_step
        self.last_measurement = tuple(float(x) for x in bbox)

    @property
    def bbox(self) -> tuple:
        return _z_to_bbox(self.mean[:4])

    @property
    def reported_bbox(self) -> tuple:
        """Measured box while matched; the Kalman prediction while coasting.

        Reporting the measurement keeps the no-noise pipeline exact; the
        filter exists to carry tracks through detector dropouts.
        """
        return self.bbox if self.misses > 0 else self.last_measurement

    def predict(self) -> tuple:
        # Keep predicted area positive; zero the scale velocity if it would flip.
        if self.mean[2] + self.mean[6] <= 0:
            self.mean[6] = 0.0
        self.mean = _F @ self.mean
        self.covariance = _F @ self.covariance @ _F.T + _Q
        self.age += 1
        return self.bbox

    def update(self, bbox, depth: float, source_step: int) -> None:
        z = _bbox_to_z(bbox)
        y = z - _H @ self.mean
        s = _H @ self.covariance @ _H.T + _R
        k = self.covariance @ _H.T @ np.linalg.inv(s)
        self.mean = self.mean + k @ y
        self.covariance = (np.eye(7) - k @ _H) @ self.covariance
        self.hits += 1
        self.misses = 0
        self.depth = float(depth)
        self.last_source_step = source_step
        self.last_measurement = tuple(float(x) for x in bbox)

    def mark_missed(self) -> None:
        self.hits = 0
        self.misses += 1


def associate(track_boxes, det_boxes, threshold: float):
    """Match track boxes to detection boxes maximizing total IoU.

    Returns (matches, unmatched_track_idx, unmatched_det_idx); matches are
    (track_idx, det_idx) pairs with IoU >= threshold. Optimality of the
    underlying assignment is over the full IoU matrix; thresholding happens
    afterwards, so a low-quality optimal pair becomes a miss, not a worse pair.
    """
    if not track_boxes or not det_boxes:
        return [], list(range(len(track_boxes))), list(range(len(det_boxes)))
    matrix = np.zeros((len(track_boxes), len(det_boxes)))
    for i, tb in enumerate(track_boxes):
        for j, db in enumerate(det_boxes):
            matrix[i, j] = iou(tb, db)
    rows, cols = linear_sum_assignment(-matrix)
    matches = []
    matched_t, matched_d = set(), set()
    for i, j in zip(rows, cols):
        if matrix[i, j] >= threshold and matrix[i, j] > 0.0:
            matches.append((int(i), int(j)))
            matched_t.add(int(i))
            matched_d.add(int(j))
    unmatched_t = [i for i in range(len(track_boxes)) if i not in matched_t]
    unmatched_d = [j for j in range(len(det_boxes)) if j not in matched_d]
    return matches, unmatched_t, unmatched_d


class SortTracker:
    """Frame-by-frame tracker; a single owner advances it once per frame."""

    def __init__(self, config: TrackerConfig = TrackerConfig()):
        self.config = config
        self.tracks: list = []
        self._next_id = 1

    def step(self, detections, source_step: int = 0) -> list:
        """Advance one frame with a list of Detection; returns TrackReports.

        Tracks matched this frame report the measured box; coasting tracks
        report the prediction with their last matched depth until they have
        missed more than max_misses frames, after which they are dropped.
        """
        predicted = [t.predict() for t in self.tracks]
        det_boxes = [d.bbox for d in detections]
        matches, unmatched_t, unmatched_d = associate(
            predicted, det_boxes, self.config.iou_threshold
        )
        for ti, di in matches:
            self.tracks[ti].update(det_boxes[di], detections[di].depth, source_step)
        for ti in unmatched_t:
            self.tracks[ti].mark_missed()
        for di in unmatched_d:
            self.tracks.append(
                Track(self._next_id, det_boxes[di], detections[di].depth, source_step)
            )
            self._next_id += 1
        self.tracks = [t for t in self.tracks if t.misses <= self.config.max_misses]

        reports = []
        for t in self.tracks:
            if t.hits >= self.config.min_hits:
                t.confirmed = True
            if t.confirmed:
                reports.append(TrackReport(
                    track_id=t.id,
                    bbox=t.reported_bbox,
                    depth=t.depth,
                    coasting=t.misses > 0,
                    source_step=source_step,
                ))
        return reports
