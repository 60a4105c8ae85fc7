import math

import numpy as np
import pytest

from dh_oracle import oracle_points
from ssmsim.kinematics import (DEFAULT_ROUTINE, NOMINAL_JOINT_SPEED_RAD_S,
                               JointPathInterpolator, RobotGeometry,
                               UR3_GEOMETRY, forward_kinematics, normalize_joints)


class TestForwardKinematics:
    def test_zero_pose_matches_oracle(self):
        points = forward_kinematics(UR3_GEOMETRY, np.zeros(6))
        elbow, wrist, tcp = oracle_points(np.zeros(6))
        assert np.allclose(points.elbow, elbow, atol=1e-9)
        assert np.allclose(points.wrist, wrist, atol=1e-9)
        assert np.allclose(points.tcp, tcp, atol=1e-9)

    def test_matches_oracle_on_random_joints(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            q = rng.uniform(-math.pi, math.pi, 6)
            points = forward_kinematics(UR3_GEOMETRY, q)
            elbow, wrist, tcp = oracle_points(q)
            assert np.allclose(points.elbow, elbow, atol=1e-6)
            assert np.allclose(points.wrist, wrist, atol=1e-6)
            assert np.allclose(points.tcp, tcp, atol=1e-6)

    def test_matches_oracle_with_base_pose(self):
        geom = RobotGeometry(base_position=(100.0, -250.0, 30.0), base_yaw=1.1)
        rng = np.random.default_rng(7)
        for _ in range(50):
            q = rng.uniform(-math.pi, math.pi, 6)
            points = forward_kinematics(geom, q)
            elbow, wrist, tcp = oracle_points(q, base_position=(100.0, -250.0, 30.0),
                                              base_yaw=1.1)
            assert np.allclose(points.tcp, tcp, atol=1e-6)
            assert np.allclose(points.wrist, wrist, atol=1e-6)

    def test_base_joint_symmetry(self):
        q = np.radians([25.0, -100.0, 110.0, -95.0, -90.0, 10.0])
        q_rot = q.copy()
        q_rot[0] += math.pi
        a = forward_kinematics(UR3_GEOMETRY, q)
        b = forward_kinematics(UR3_GEOMETRY, q_rot)
        rot = np.array([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
        for pa, pb in zip((a.elbow, a.wrist, a.tcp), (b.elbow, b.wrist, b.tcp)):
            assert np.allclose(rot @ pa, pb, atol=1e-9)

    def test_rejects_bad_joint_vectors(self):
        with pytest.raises(ValueError):
            forward_kinematics(UR3_GEOMETRY, np.zeros(5))
        with pytest.raises(ValueError):
            forward_kinematics(UR3_GEOMETRY, [0, 0, math.nan, 0, 0, 0])

    def test_reach_bounds_hold_over_default_routine(self):
        # The working envelope claims (500 mm to the wrist links, 662.8 mm
        # with the tool) hold everywhere the shipped routine actually goes.
        interp = JointPathInterpolator(DEFAULT_ROUTINE)
        for _ in range(2000):
            q = interp.step(1.0 / 60.0, 1.0)
            points = forward_kinematics(UR3_GEOMETRY, q)
            assert np.linalg.norm(points.elbow) <= 500.0 + 1e-6
            assert np.linalg.norm(points.wrist) <= 500.0 + 1e-6
            assert np.linalg.norm(points.tcp) <= 662.8 + 1e-6


class TestNormalizeJoints:
    def test_wraps_into_half_open_interval(self):
        q = normalize_joints([3 * math.pi / 2, -math.pi, math.pi, 0.0, -4 * math.pi, 7.0])
        assert q[0] == pytest.approx(-math.pi / 2)
        assert q[1] == pytest.approx(math.pi)  # -pi normalizes to +pi
        assert q[2] == pytest.approx(math.pi)
        assert q[3] == 0.0
        assert q[4] == pytest.approx(0.0)
        assert all(-math.pi < a <= math.pi for a in q)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            normalize_joints([0, 0, 0, 0, 0, math.inf])


class TestJointPathInterpolator:
    def test_zero_fraction_holds_position(self):
        interp = JointPathInterpolator(DEFAULT_ROUTINE)
        before = interp.joints
        for _ in range(20):
            interp.step(1.0 / 60.0, 0.0)
        assert np.array_equal(interp.joints, before)
        assert interp.progress == 0.0

    def test_half_speed_takes_twice_the_steps(self):
        def steps_to_lap(fraction):
            interp = JointPathInterpolator(DEFAULT_ROUTINE)
            n = 0
            while interp.laps < 1:
                interp.step(1.0 / 60.0, fraction)
                n += 1
            return n

        full, half = steps_to_lap(1.0), steps_to_lap(0.5)
        assert abs(half - 2 * full) <= 2

    def test_routine_loops_back_to_first_waypoint(self):
        interp = JointPathInterpolator(DEFAULT_ROUTINE)
        while interp.laps < 1:
            interp.step(1.0 / 60.0, 1.0)
        # one full lap later the position is back near the start
        assert np.allclose(interp.joints, DEFAULT_ROUTINE[0], atol=NOMINAL_JOINT_SPEED_RAD_S / 60.0)

    def test_per_step_displacement_bounded_by_nominal_speed(self):
        interp = JointPathInterpolator(DEFAULT_ROUTINE)
        dt = 1.0 / 60.0
        prev = interp.joints
        for _ in range(500):
            q = interp.step(dt, 1.0)
            assert np.max(np.abs(q - prev)) <= NOMINAL_JOINT_SPEED_RAD_S * dt + 1e-12
            prev = q

    def test_empty_waypoints_rejected(self):
        with pytest.raises(ValueError):
            JointPathInterpolator([])

    def test_resume_continues_from_held_progress(self):
        interp = JointPathInterpolator(DEFAULT_ROUTINE)
        for _ in range(30):
            interp.step(1.0 / 60.0, 1.0)
        held = interp.progress
        for _ in range(10):
            interp.step(1.0 / 60.0, 0.0)
        assert interp.progress == held
        interp.step(1.0 / 60.0, 1.0)
        assert interp.progress > held
