import itertools

import numpy as np
import pytest

from ssmsim.camera import Detection
from ssmsim.tracking import (SortTracker, Track, TrackerConfig, associate, iou)


def det(u0, v0, u1, v1, depth=1750.0):
    return Detection(bbox=(u0, v0, u1, v1), depth=depth)


def brute_force_max_iou(track_boxes, det_boxes):
    """Best total IoU over all one-to-one pairings (exhaustive)."""
    n_t, n_d = len(track_boxes), len(det_boxes)
    best = 0.0
    k = min(n_t, n_d)
    for t_subset in itertools.permutations(range(n_t), k):
        for d_subset in itertools.combinations(range(n_d), k):
            total = sum(iou(track_boxes[t], det_boxes[d])
                        for t, d in zip(t_subset, d_subset))
            best = max(best, total)
    return best


class TestIou:
    def test_identical_boxes(self):
        assert iou((0, 0, 10, 10), (0, 0, 10, 10)) == 1.0

    def test_disjoint_boxes(self):
        assert iou((0, 0, 10, 10), (20, 20, 30, 30)) == 0.0

    def test_hand_computed_overlap(self):
        # intersection 2, union 6
        assert iou((0, 0, 2, 2), (1, 0, 3, 2)) == pytest.approx(1.0 / 3.0)

    def test_degenerate_boxes_give_zero(self):
        assert iou((5, 5, 5, 5), (0, 0, 10, 10)) == 0.0

    def test_bounded_and_symmetric(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            a = sorted(rng.uniform(0, 100, 2)) + sorted(rng.uniform(0, 100, 2))
            b = sorted(rng.uniform(0, 100, 2)) + sorted(rng.uniform(0, 100, 2))
            box_a = (a[0], a[2], a[1], a[3])
            box_b = (b[0], b[2], b[1], b[3])
            val = iou(box_a, box_b)
            assert 0.0 <= val <= 1.0
            assert val == pytest.approx(iou(box_b, box_a))


class TestAssociate:
    def test_single_good_match(self):
        matches, ut, ud = associate([(0, 0, 10, 10)], [(1, 1, 11, 11)], 0.3)
        assert matches == [(0, 0)]
        assert ut == [] and ud == []

    def test_empty_detections(self):
        matches, ut, ud = associate([(0, 0, 10, 10)], [], 0.3)
        assert matches == [] and ut == [0] and ud == []

    def test_below_threshold_unmatched(self):
        matches, ut, ud = associate([(0, 0, 10, 10)], [(9, 9, 19, 19)], 0.3)
        assert matches == []
        assert ut == [0] and ud == [0]

    def test_swapped_configuration_takes_greater_total(self):
        # two tracks and two detections arranged so the greedy per-track
        # best would cross-pair suboptimally
        tracks = [(0, 0, 10, 10), (8, 0, 18, 10)]
        dets = [(1, 0, 11, 10), (7, 0, 17, 10)]
        matches, _, _ = associate(tracks, dets, 0.0)
        total = sum(iou(tracks[t], dets[d]) for t, d in matches)
        assert total == pytest.approx(brute_force_max_iou(tracks, dets))

    def test_assignment_total_equals_brute_force_on_random_instances(self):
        # acceptance oracle: 1000 seeded instances up to 4x4
        rng = np.random.default_rng(2024)

        def random_boxes(n):
            boxes = []
            for _ in range(n):
                u0, v0 = rng.uniform(0, 80, 2)
                w, h = rng.uniform(5, 40, 2)
                boxes.append((u0, v0, u0 + w, v0 + h))
            return boxes

        for _ in range(1000):
            tracks = random_boxes(int(rng.integers(0, 5)))
            dets = random_boxes(int(rng.integers(0, 5)))
            matches, _, _ = associate(tracks, dets, 0.0)
            total = sum(iou(tracks[t], dets[d]) for t, d in matches)
            assert total == pytest.approx(brute_force_max_iou(tracks, dets), abs=1e-9)

    def test_no_duplicate_assignment(self):
        rng = np.random.default_rng(77)
        for _ in range(200):
            tracks = [(x, x, x + 20, x + 20) for x in rng.uniform(0, 60, 3)]
            dets = [(x, x, x + 20, x + 20) for x in rng.uniform(0, 60, 4)]
            matches, _, _ = associate(tracks, dets, 0.1)
            assert len({t for t, _ in matches}) == len(matches)
            assert len({d for _, d in matches}) == len(matches)


class TestTrackLifecycle:
    def test_single_target_keeps_one_id(self):
        tracker = SortTracker()
        ids = set()
        for step in range(60):
            x = 100 + step * 3  # slow drift, large overlap
            reports = tracker.step([det(x, 100, x + 60, 160)], source_step=step)
            assert len(reports) == 1
            ids.add(reports[0].track_id)
        assert len(ids) == 1

    def test_prediction_covers_short_dropouts(self):
        tracker = SortTracker(TrackerConfig(max_misses=3))
        for step in range(10):
            tracker.step([det(100 + 5 * step, 100, 160 + 5 * step, 160)], step)
        # two dropped frames: still reported, via prediction, same id
        r1 = tracker.step([], 10)
        r2 = tracker.step([], 11)
        assert len(r1) == 1 and len(r2) == 1
        assert r1[0].coasting and r2[0].coasting
        # prediction keeps moving with the learned velocity
        assert r2[0].bbox[0] > r1[0].bbox[0]
        # reappearing detection is matched back to the same id
        r3 = tracker.step([det(160, 100, 220, 160)], 12)
        assert r3[0].track_id == r1[0].track_id
        assert not r3[0].coasting

    def test_track_deleted_after_max_misses_and_id_not_reused(self):
        tracker = SortTracker(TrackerConfig(max_misses=3))
        first = tracker.step([det(100, 100, 160, 160)], 0)[0].track_id
        for step in range(1, 5):
            tracker.step([], step)  # 4 consecutive misses > max_misses
        assert tracker.step([], 5) == []
        reborn = tracker.step([det(100, 100, 160, 160)], 6)[0].track_id
        assert reborn != first

    def test_coasting_reported_at_most_max_misses_frames(self):
        tracker = SortTracker(TrackerConfig(max_misses=3))
        tracker.step([det(100, 100, 160, 160)], 0)
        reported = 0
        for step in range(1, 8):
            if tracker.step([], step):
                reported += 1
        assert reported == 3

    def test_min_hits_gates_reporting(self):
        tracker = SortTracker(TrackerConfig(min_hits=3))
        assert tracker.step([det(0, 0, 60, 60)], 0) == []
        assert tracker.step([det(2, 0, 62, 60)], 1) == []
        assert len(tracker.step([det(4, 0, 64, 60)], 2)) == 1

    def test_matched_report_carries_measured_box_and_depth(self):
        tracker = SortTracker()
        tracker.step([det(100, 100, 160, 160, depth=1700.0)], 0)
        rep = tracker.step([det(105, 100, 165, 160, depth=1720.0)], 1)[0]
        assert rep.bbox == (105, 100, 165, 160)
        assert rep.depth == 1720.0

    def test_coasting_keeps_last_matched_depth(self):
        tracker = SortTracker()
        tracker.step([det(100, 100, 160, 160, depth=1680.0)], 0)
        rep = tracker.step([], 1)[0]
        assert rep.depth == 1680.0

    def test_two_targets_no_identity_swap(self):
        tracker = SortTracker()
        ids_by_side = {}
        for step in range(40):
            left = det(100 + step, 100, 160 + step, 160)
            right = det(400 - step, 100, 460 - step, 160)
            reports = tracker.step([left, right], step)
            assert len(reports) == 2
            for rep in reports:
                side = "left" if rep.bbox[0] < 300 else "right"
                ids_by_side.setdefault(side, set()).add(rep.track_id)
        assert len(ids_by_side["left"]) == 1
        assert len(ids_by_side["right"]) == 1
        assert ids_by_side["left"] != ids_by_side["right"]


class TestKalmanProperties:
    def test_zero_velocity_prediction_is_stationary(self):
        track = Track(1, (100, 100, 160, 160), 1750.0, 0)
        before = track.bbox
        track.predict()
        assert np.allclose(track.bbox, before, atol=1e-9)

    def test_constant_velocity_advances_center(self):
        track = Track(1, (100, 100, 160, 160), 1750.0, 0)
        track.mean[4] = 5.0  # horizontal center velocity, px/frame
        track.predict()
        assert track.bbox[0] == pytest.approx(105.0, abs=1e-9)

    def test_covariance_trace_nondecreasing_under_prediction(self):
        track = Track(1, (100, 100, 160, 160), 1750.0, 0)
        for _ in range(10):
            before = np.trace(track.covariance)
            track.predict()
            assert np.trace(track.covariance) >= before - 1e-12
