"""Deterministic discrete-time workspace simulation.

Each step advances scripted operators, synthesizes head detections from
ground truth, pushes them through the delayed perception pipeline, computes
the mode command, applies due commands (with a linear stop ramp), advances
the robot, and emits events. Same config and seed always produce the same
event stream, byte for byte.

Pipeline delays are quantized to whole frames: detections reach the tracker
`round(perception/dt)` steps after capture and commands take effect
`round((decision+actuation)/dt)` steps after computation, so every latency
figure in the log is within half a frame of the configured value.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .camera import Detection, default_camera, estimate_operator, world_to_pixel
from .config import ScenarioConfig
from .kinematics import (JointPathInterpolator, RobotGeometry, _frames,
                         forward_kinematics)
from .monitor import (OperationMode, SpeedCommand, command_for_mode,
                      make_operator_estimate, update_collision_set)
from .replan import replan_tcp_path
from .safety import SafetyZone, classify_zone, compute_zone_boundaries
from .tracking import SortTracker, TrackerConfig

__all__ = ["Simulation", "RobotState", "measure_reaction_time", "measure_stop_time",
           "TCP_NOMINAL_SPEED_MM_S"]

# Cartesian pace of the avoidance executor at fraction 1.0; mirrors the
# joint-space routine's tool speed.
TCP_NOMINAL_SPEED_MM_S = 1000.0

_ESTIMATE_PAIR_GATE_MM = 500.0


@dataclass
class RobotState:
    joints: np.ndarray
    elbow: np.ndarray
    wrist: np.ndarray
    tcp: np.ndarray
    speed_fraction: float      # commanded fraction (0 while stopping/stopped)
    effective_fraction: float  # after the stop ramp
    stopped: bool
    routine_progress: float


class _TruthOperator:
    """Scripted ground-truth person."""

    def __init__(self, script):
        self.script = script
        self.position = np.array(script.start, dtype=float)
        self.waypoint_idx = 0
        self.move_idx = 0
        self.dwell_left = 0.0
        self.present = False
        self.zone = None

    def advance(self, t_end: float, dt: float) -> None:
        s = self.script
        if t_end < s.appear or (s.disappear is not None and t_end >= s.disappear):
            self.present = False
            return
        self.present = True
        while self.move_idx < len(s.moves) and s.moves[self.move_idx].t <= t_end:
            self.position = np.array(s.moves[self.move_idx].position, dtype=float)
            self.move_idx += 1
        remaining = dt
        while remaining > 1e-12 and self.waypoint_idx < len(s.waypoints):
            if self.dwell_left > 0.0:
                used = min(self.dwell_left, remaining)
                self.dwell_left -= used
                remaining -= used
                if self.dwell_left > 0.0:
                    return
                self._finish_waypoint()
                continue
            wx, wy, dwell = s.waypoints[self.waypoint_idx]
            target = np.array([wx, wy])
            gap = float(np.hypot(*(target - self.position)))
            travel = s.speed * remaining
            if s.speed <= 0.0 or gap > travel:
                if travel > 0.0 and gap > 0.0:
                    self.position = self.position + (target - self.position) * (travel / gap)
                return
            self.position = target
            remaining -= gap / s.speed if s.speed > 0 else remaining
            if dwell > 0.0:
                self.dwell_left = dwell
            else:
                self._finish_waypoint()
                if not self.present:
                    return

    def _finish_waypoint(self) -> None:
        s = self.script
        self.waypoint_idx += 1
        if self.waypoint_idx >= len(s.waypoints):
            if s.at_end == "loop" and len(s.waypoints) > 0:
                self.waypoint_idx = 0
            elif s.at_end == "disappear":
                self.present = False
            # hold: stay at the last waypoint forever


def _position_jacobian(geom: RobotGeometry, q) -> np.ndarray:
    """3x6 TCP position Jacobian from the DH frames (revolute axes)."""
    frames = _frames(geom, np.asarray(q, dtype=float))
    tcp = (frames[5] @ np.array([0.0, 0.0, geom.tool_length, 1.0]))[:3]
    jac = np.zeros((3, 6))
    # Joint 1 turns about the base z-axis; later joints about their frame z.
    origins = [np.asarray(geom.base_position, dtype=float)]
    axes = [np.array([0.0, 0.0, 1.0])]
    for f in frames[:5]:
        origins.append(f[:3, 3])
        axes.append(f[:3, 2])
    for i in range(6):
        jac[:, i] = np.cross(axes[i], tcp - origins[i])
    return jac


def _track_tcp(geom: RobotGeometry, q, target, iters: int = 60) -> np.ndarray:
    """Damped least-squares joint update pulling the TCP to a nearby target.

    Internal plumbing for the avoidance executor; per-step targets move a
    few millimetres so convergence is fast and deterministic.
    """
    q = np.asarray(q, dtype=float).copy()
    damping_sq = 64.0  # mm^2
    for _ in range(iters):
        err = np.asarray(target, dtype=float) - forward_kinematics(geom, q).tcp
        if float(np.linalg.norm(err)) < 1e-7:
            break
        jac = _position_jacobian(geom, q)
        gram = jac @ jac.T + damping_sq * np.eye(3)
        dq = jac.T @ np.linalg.solve(gram, err)
        np.clip(dq, -0.15, 0.15, out=dq)
        q = q + dq
    return q


class _AvoidanceExecutor:
    """Moves the TCP along the routine's Cartesian legs, detouring around cylinders."""

    def __init__(self, geom: RobotGeometry, routine, start_joints):
        self.geom = geom
        self.targets = [forward_kinematics(geom, q).tcp for q in routine]
        self.leg = 0
        self.laps = 0
        self.joints = np.asarray(start_joints, dtype=float).copy()
        self.tcp = forward_kinematics(geom, self.joints).tcp
        self.holding = False
        self.detoured = False

    @property
    def progress(self) -> float:
        target = self.targets[self.leg]
        prev = self.targets[self.leg - 1]
        span = float(np.linalg.norm(target - prev))
        done = span - float(np.linalg.norm(target - self.tcp))
        frac = min(max(done / span, 0.0), 1.0) if span > 0 else 1.0
        return self.leg + frac

    def step(self, budget_mm: float, cylinders, margin: float):
        """Advance up to budget_mm along the (replanned) path; returns flags."""
        base_xy = self.geom.base_position[:2]
        reach = self.geom.reach_with_tool - 1.0
        was_holding, was_detoured = self.holding, self.detoured
        self.holding = False
        self.detoured = False
        while budget_mm > 1e-9:
            target = self.targets[self.leg]
            if float(np.linalg.norm(target - self.tcp)) < 1e-6:
                self._next_leg()
                continue
            path = replan_tcp_path([self.tcp, target], cylinders, margin,
                                   base_xy=base_xy, reach_limit=reach)
            if path is None:
                self.holding = True
                break
            if len(path) > 2:
                self.detoured = True
            advanced = False
            for a, b in zip(path[:-1], path[1:]):
                seg = float(np.linalg.norm(b - a))
                if seg <= 1e-9:
                    continue
                if budget_mm < seg:
                    self.tcp = a + (b - a) * (budget_mm / seg)
                    budget_mm = 0.0
                    advanced = True
                    break
                self.tcp = b
                budget_mm -= seg
                advanced = True
            if not advanced:
                break
            if float(np.linalg.norm(self.targets[self.leg] - self.tcp)) < 1e-6:
                self._next_leg()
        self.joints = _track_tcp(self.geom, self.joints, self.tcp)
        self.tcp = forward_kinematics(self.geom, self.joints).tcp
        return {
            "hold_started": self.holding and not was_holding,
            "detour_started": self.detoured and not was_detoured,
        }

    def _next_leg(self) -> None:
        self.leg += 1
        if self.leg >= len(self.targets):
            self.leg = 0
            self.laps += 1


class Simulation:
    """Single-owner state machine; call step() once per frame or run() to finish."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.dt = config.dt
        self.bounds = compute_zone_boundaries(config.ssm, config.clearance)
        self.camera = default_camera(config.camera.position, config.camera.mount_height)
        self.geometry = RobotGeometry(
            base_position=(config.robot.base[0], config.robot.base[1], 0.0),
            base_yaw=config.robot.base_yaw,
            tool_length=config.robot.tool_length,
        )
        self.tracker = SortTracker(TrackerConfig(
            max_misses=config.tracker_max_misses,
            min_hits=config.tracker_min_hits,
            iou_threshold=config.tracker_iou_threshold,
        ))
        self.interpolator = JointPathInterpolator(
            [np.asarray(q) for q in config.robot.routine],
            nominal_speed=config.robot.nominal_joint_speed,
        )
        self.mode = config.mode
        self.avoidance = (
            _AvoidanceExecutor(self.geometry, config.robot.routine,
                               config.robot.routine[0])
            if config.mode == OperationMode.OBSTACLE_AVOIDANCE else None
        )
        self.rng = np.random.default_rng(config.seed)
        self.operators = [_TruthOperator(s) for s in config.operators]

        self.step_index = 0
        self.events: list = []
        self.estimates: list = []
        self.cylinders: list = []
        self.active_command = SpeedCommand(1.0)
        self.effective_fraction = 1.0
        self.ramp_t0 = None          # absolute time the stop ramp starts
        self.ramp_e0 = 0.0
        self.stop_completed = True
        self.collision_count = 0
        self._det_queue: deque = deque()
        self._cmd_queue: list = []   # (due_step, seq, source_step, SpeedCommand)
        self._cmd_seq = 0
        self._truth_history: dict = {}
        self._report_zones: dict = {}
        self._contacts: set = set()
        self._perception_steps = max(int(round(config.latency.perception / self.dt)), 0)
        self._last_command_change = -math.inf
        self._robot_state = self._make_robot_state()
        self._step_events: list = []

        self._emit(0.0, "run_header", {
            "scenario": config.scenario_id,
            "seed": config.seed,
            "mode": config.mode.value,
            "fps": config.fps,
            "s_a": self.bounds.s_a,
            "s_b": self.bounds.s_b,
            "base": list(config.robot.base),
        })

    # ------------------------------------------------------------------ events

    def _emit(self, t: float, kind: str, payload: dict) -> None:
        event = {"t": round(t, 9), "step": self.step_index, "event": kind}
        event.update(payload)
        self.events.append(event)
        self._step_events.append(event)

    # ------------------------------------------------------------------- robot

    def _make_robot_state(self) -> RobotState:
        if self.avoidance is not None:
            joints = self.avoidance.joints
            progress = self.avoidance.progress
        else:
            joints = self.interpolator.joints
            progress = self.interpolator.progress
        points = forward_kinematics(self.geometry, joints)
        commanded = 0.0 if self.active_command.stop else self.active_command.fraction
        return RobotState(
            joints=np.asarray(joints, dtype=float),
            elbow=points.elbow, wrist=points.wrist, tcp=points.tcp,
            speed_fraction=commanded,
            effective_fraction=self.effective_fraction,
            stopped=self.active_command.stop and self.effective_fraction == 0.0,
            routine_progress=progress,
        )

    @property
    def robot(self) -> RobotState:
        return self._robot_state

    @property
    def time(self) -> float:
        return self.step_index * self.dt

    # --------------------------------------------------------------- synthesis

    def _synthesize_detections(self) -> list:
        noise = self.config.noise
        cam = self.camera
        detections = []
        for op in sorted(self.operators, key=lambda o: o.script.op_id):
            if not op.present:
                continue
            head = np.array([op.position[0], op.position[1], op.script.height])
            try:
                u, v, depth = world_to_pixel(cam, head)
            except ValueError:
                continue
            if noise.bbox_jitter_std > 0:
                jitter = self.rng.normal(0.0, noise.bbox_jitter_std, 2)
                u, v = u + jitter[0], v + jitter[1]
            if noise.depth_noise_std > 0:
                depth = depth + float(self.rng.normal(0.0, noise.depth_noise_std))
            missed = noise.miss_probability > 0 and \
                float(self.rng.uniform()) < noise.miss_probability
            if not cam.contains_pixel(u, v):
                continue
            band = noise.border_miss_band
            if band > 0 and (u < band or v < band
                             or u > cam.image_width - band or v > cam.image_height - band):
                continue
            if missed or depth <= 0:
                continue
            half_u = self.config.head_size / 2.0 * cam.fx / depth
            half_v = self.config.head_size / 2.0 * cam.fy / depth
            detections.append(Detection(
                bbox=(u - half_u, v - half_v, u + half_u, v + half_v),
                depth=depth,
            ))
        return detections

    # -------------------------------------------------------------- perception

    def _process_frame(self, detections: list, source_step: int) -> None:
        reports = self.tracker.step(detections, source_step=source_step)
        estimates = []
        for rep in reports:
            try:
                position, height = estimate_operator(
                    self.camera, Detection(bbox=rep.bbox, depth=rep.depth))
            except ValueError as exc:
                self._emit(self._t_end, "estimate_rejected",
                           {"track": rep.track_id, "reason": str(exc)})
                continue
            estimates.append(make_operator_estimate(
                rep.track_id, position, height, self.bounds, self.config.robot.base))
        self.estimates = estimates
        self.cylinders = update_collision_set(estimates, self.config.cylinder_radius)

        for est in estimates:
            prev = self._report_zones.get(est.track_id)
            if prev != est.zone:
                self._emit(self._t_end, "report_zone", {
                    "track": est.track_id,
                    "from": prev.label if prev is not None else None,
                    "to": est.zone.label,
                    "distance": round(est.distance_to_base, 3),
                    "src": source_step,
                })
                self._report_zones[est.track_id] = est.zone
        live = {e.track_id for e in estimates}
        for track_id in [t for t in self._report_zones if t not in live]:
            del self._report_zones[track_id]

        self._emit_zone_samples(estimates, source_step)

    def _emit_zone_samples(self, estimates: list, source_step: int) -> None:
        truth = self._truth_history.get(source_step)
        if truth is None:
            return
        pairs = []
        for op_id, (pos, zone) in truth.items():
            for est in estimates:
                dist = math.hypot(est.position[0] - pos[0], est.position[1] - pos[1])
                if dist <= _ESTIMATE_PAIR_GATE_MM:
                    pairs.append((dist, op_id, est.track_id, est.zone))
        pairs.sort(key=lambda p: (p[0], p[1], p[2]))
        matched_ops, matched_tracks, chosen = set(), set(), {}
        for dist, op_id, track_id, zone in pairs:
            if op_id in matched_ops or track_id in matched_tracks:
                continue
            matched_ops.add(op_id)
            matched_tracks.add(track_id)
            chosen[op_id] = (track_id, zone)
        for op_id, (pos, zone) in sorted(truth.items()):
            track_id, pred = chosen.get(op_id, (None, None))
            self._emit(self._t_end, "zone_sample", {
                "src": source_step,
                "op": op_id,
                "truth": zone.label,
                "pred": pred.label if pred is not None else None,
                "track": track_id,
            })

    # ----------------------------------------------------------------- command

    def _enqueue_command(self, command: SpeedCommand, source_step: int) -> None:
        latency = self.config.latency
        decision = latency.decision + latency.decision_per_operator * len(self.estimates)
        steps = max(int(round((decision + latency.actuation) / self.dt)), 0)
        self._cmd_queue.append((self.step_index + steps, self._cmd_seq, source_step, command))
        self._cmd_seq += 1

    def _apply_due_commands(self) -> None:
        due = [c for c in self._cmd_queue if c[0] <= self.step_index]
        if not due:
            return
        self._cmd_queue = [c for c in self._cmd_queue if c[0] > self.step_index]
        due.sort(key=lambda c: (c[0], c[1]))
        _, _, source_step, command = due[-1]
        previous = self.active_command
        if (command.fraction, command.stop, command.replan_required) != \
                (previous.fraction, previous.stop, previous.replan_required):
            # The optional dwell only suppresses speed-up chatter at zone
            # boundaries; anything that slows or stops the robot always
            # applies immediately.
            dwell = self.config.command_dwell
            protective = command.stop or (not previous.stop
                                          and command.fraction < previous.fraction)
            if (dwell > 0.0 and not protective
                    and self._t_end - self._last_command_change < dwell - 1e-12):
                return
            self._last_command_change = self._t_end
            self._emit(self._t_end, "command", {
                "fraction": command.fraction,
                "stop": command.stop,
                "replan": command.replan_required,
                "governing": command.governing_operator,
                "src": source_step,
            })
            if command.stop and not previous.stop:
                # Ramp is anchored at the end of the apply step; the robot
                # finishes this frame at its pre-stop speed, then winds down.
                self.ramp_t0 = self._t_end
                self.ramp_e0 = self.effective_fraction
                self.stop_completed = False
                self._emit(self._t_end, "stop_begin", {"governing": command.governing_operator})
            if previous.stop and not command.stop:
                self.ramp_t0 = None
                self._emit(self._t_end, "resume", {"fraction": command.fraction})
        elif command.governing_operator != previous.governing_operator:
            self._emit(self._t_end, "governor", {"governing": command.governing_operator})
        self.active_command = command

    def _effective_integral(self, t0: float, t1: float) -> float:
        """Mean effective fraction over [t0, t1) honoring the stop ramp."""
        if not self.active_command.stop:
            self.effective_fraction = self.active_command.fraction
            return self.active_command.fraction
        ramp = self.config.latency.stop_ramp
        rt0, e0 = self.ramp_t0, self.ramp_e0
        if rt0 is None:  # stopped before any ramp state (start of run)
            self.effective_fraction = 0.0
            return 0.0

        def e_at(t: float) -> float:
            if t <= rt0:
                return e0
            if ramp <= 0.0 or t >= rt0 + ramp:
                return 0.0
            return e0 * (1.0 - (t - rt0) / ramp)

        # Piecewise linear: integrate over [t0, min(t1, rt0)], the ramp span,
        # and the stopped tail.
        knots = sorted({t0, t1, min(max(rt0, t0), t1),
                        min(max(rt0 + ramp, t0), t1)})
        total = 0.0
        for a, b in zip(knots[:-1], knots[1:]):
            if b <= a:
                continue
            total += (e_at(a) + e_at(b)) / 2.0 * (b - a)
        self.effective_fraction = e_at(t1)
        if not self.stop_completed and e_at(t1) == 0.0:
            complete_t = rt0 + ramp if ramp > 0 else rt0
            self._emit(complete_t, "stop_complete", {})
            self.stop_completed = True
        return total / (t1 - t0)

    # --------------------------------------------------------------- collision

    def _check_collisions(self, robot: RobotState) -> None:
        points = {"tcp": robot.tcp, "wrist": robot.wrist, "elbow": robot.elbow}
        radius = self.config.cylinder_radius
        current = set()
        for op in self.operators:
            if not op.present:
                continue
            for name, point in points.items():
                horizontal = math.hypot(point[0] - op.position[0],
                                        point[1] - op.position[1])
                if horizontal < radius and 0.0 <= point[2] <= op.script.height:
                    current.add((op.script.op_id, name))
        for key in sorted(current - self._contacts):
            self.collision_count += 1
            self._emit(self._t_end, "collision", {
                "op": key[0], "point": key[1],
            })
        self._contacts = current

    # -------------------------------------------------------------------- step

    def step(self) -> list:
        """Advance one frame; returns the events emitted during it."""
        self._step_events = []
        t0 = self.step_index * self.dt
        t1 = (self.step_index + 1) * self.dt
        self._t_end = t1

        # 1. ground truth motion
        truth_frame = {}
        for op in self.operators:
            was_present = op.present
            op.advance(t1, self.dt)
            if op.present:
                dist = math.hypot(op.position[0] - self.config.robot.base[0],
                                  op.position[1] - self.config.robot.base[1])
                zone = classify_zone(dist, self.bounds)
                truth_frame[op.script.op_id] = ((op.position[0], op.position[1]), zone)
                if zone != op.zone:
                    self._emit(t1, "truth_zone", {
                        "op": op.script.op_id,
                        "from": op.zone.label if op.zone is not None else None,
                        "to": zone.label,
                        "distance": round(dist, 3),
                    })
                    op.zone = zone
            elif was_present:
                op.zone = None
        self._truth_history[self.step_index] = truth_frame
        for old in [s for s in self._truth_history
                    if s < self.step_index - self._perception_steps - 2]:
            del self._truth_history[old]

        # 2-4. synthetic detections through the delayed perception pipeline
        self._det_queue.append((self.step_index, self._synthesize_detections()))
        if len(self._det_queue) > self._perception_steps:
            source_step, detections = self._det_queue.popleft()
            self._process_frame(detections, source_step)
            frame_processed = source_step
        else:
            frame_processed = None

        # 5. decide and queue the command
        if frame_processed is not None:
            robot = self._robot_state
            command = command_for_mode(
                self.mode, self.estimates, self.bounds,
                elbow=robot.elbow, wrist=robot.wrist,
                joint_msd=self.config.joint_msd,
            )
            self._enqueue_command(command, frame_processed)

        # 6. apply whatever is due
        self._apply_due_commands()

        # 7. advance the robot
        mean_fraction = self._effective_integral(t0, t1)
        if self.avoidance is not None:
            detour_targets = (
                self.cylinders if self.mode == OperationMode.OBSTACLE_AVOIDANCE else []
            )
            flags = self.avoidance.step(
                TCP_NOMINAL_SPEED_MM_S * mean_fraction * self.dt,
                detour_targets, self.config.replan_margin,
            )
            if flags["detour_started"]:
                self._emit(t1, "detour", {"leg": self.avoidance.leg})
            if flags["hold_started"]:
                self._emit(t1, "replan_hold", {})
        else:
            self.interpolator.step(self.dt, min(mean_fraction, 1.0))
        self._robot_state = self._make_robot_state()

        # 8. collision events
        self._check_collisions(self._robot_state)

        self.step_index += 1
        return self._step_events

    def run(self, on_event=None) -> list:
        """Run the configured duration; returns all events."""
        n_steps = int(round(self.config.duration / self.dt))
        for _ in range(n_steps):
            for event in self.step():
                if on_event is not None:
                    on_event(event)
        return self.events

    # --------------------------------------------------------------- telemetry

    # ---------------------------------------------------------- live controls

    def set_mode(self, mode: OperationMode) -> None:
        """Switch the command table; engages the Cartesian executor for avoidance.

        Switching into avoidance mid-run starts detour execution from the
        current pose. Switching away keeps the Cartesian executor as the
        motion engine (the joint routine cannot resume from an off-path
        pose) but detours stop being planned.
        """
        if mode == self.mode:
            return
        self.mode = mode
        self._emit(self.time, "mode_change", {"mode": mode.value})
        if mode == OperationMode.OBSTACLE_AVOIDANCE and self.avoidance is None:
            if self.step_index == 0:
                start = self.config.robot.routine[0]
            else:
                start = self._robot_state.joints
            self.avoidance = _AvoidanceExecutor(
                self.geometry, self.config.robot.routine, start)

    def _find_operator(self, op_id: int):
        for op in self.operators:
            if op.script.op_id == op_id:
                return op
        return None

    def drag_operator(self, op_id: int, position) -> None:
        """Teleport a truth operator; takes effect from the next step."""
        op = self._find_operator(op_id)
        if op is None:
            raise KeyError(f"unknown operator id {op_id}")
        op.position = np.array([float(position[0]), float(position[1])])

    def add_operator(self, op_id: int, position, height: float = 1700.0) -> None:
        from .config import OperatorScript

        if self._find_operator(op_id) is not None:
            raise KeyError(f"operator id {op_id} already exists")
        op = _TruthOperator(OperatorScript(
            op_id=op_id, height=float(height), speed=0.0,
            start=(float(position[0]), float(position[1])),
        ))
        self.operators.append(op)

    def remove_operator(self, op_id: int) -> None:
        op = self._find_operator(op_id)
        if op is None:
            raise KeyError(f"unknown operator id {op_id}")
        self.operators.remove(op)

    def snapshot(self) -> dict:
        """Immutable view of the current state for the telemetry feed."""
        robot = self._robot_state
        return {
            "v": 1,
            "type": "telemetry",
            "step": self.step_index,
            "t": round(self.time, 9),
            "mode": self.mode.value,
            "zones": {"s_a": self.bounds.s_a, "s_b": self.bounds.s_b},
            "base": list(self.config.robot.base),
            "robot": {
                "joints": [round(float(q), 9) for q in robot.joints],
                "elbow": [round(float(x), 3) for x in robot.elbow],
                "wrist": [round(float(x), 3) for x in robot.wrist],
                "tcp": [round(float(x), 3) for x in robot.tcp],
                "speed_fraction": robot.speed_fraction,
                "effective_fraction": round(robot.effective_fraction, 9),
                "stopped": robot.stopped,
                "routine_progress": round(robot.routine_progress, 6),
            },
            "command": {
                "fraction": self.active_command.fraction,
                "stop": self.active_command.stop,
                "replan": self.active_command.replan_required,
                "governing": self.active_command.governing_operator,
            },
            "operators": [
                {
                    "id": est.track_id,
                    "position": [round(est.position[0], 3), round(est.position[1], 3)],
                    "height": round(est.height, 3),
                    "zone": est.zone.label,
                    "distance": round(est.distance_to_base, 3),
                }
                for est in self.estimates
            ],
            "cylinders": [
                {
                    "id": cyl.track_id,
                    "center": [round(cyl.center[0], 3), round(cyl.center[1], 3)],
                    "radius": cyl.radius,
                    "height": round(cyl.height, 3),
                    "zone": cyl.zone.label,
                }
                for cyl in self.cylinders
            ],
            "events": list(self._step_events),
        }


# ------------------------------------------------------------------ measures

_ZONE_TIER = {SafetyZone.SAFE.label: 1.0, SafetyZone.LOW_RISK.label: 0.5}


def measure_reaction_time(events) -> list:
    """Delay between each safe<->low-risk truth transition and the applied speed change.

    Transitions that never see their matching command (end of run, or a
    different operator governs) are simply left out; callers can compare
    sample count to transition count for gaps.
    """
    commands = [e for e in events if e["event"] == "command" and not e["stop"]]
    samples = []
    used = set()
    for ev in events:
        if ev["event"] != "truth_zone":
            continue
        frm, to = ev.get("from"), ev.get("to")
        if {frm, to} != {"safe", "low_risk"}:
            continue
        expected = _ZONE_TIER[to]
        for idx, cmd in enumerate(commands):
            if idx in used:
                continue
            if cmd["t"] >= ev["t"] and cmd["fraction"] == expected:
                samples.append(round(cmd["t"] - ev["t"], 9))
                used.add(idx)
                break
    return samples


def measure_stop_time(events) -> list:
    """Delay between each reported high-risk entry and the robot reaching zero speed."""
    completions = [e for e in events if e["event"] == "stop_complete"]
    samples = []
    used = set()
    for ev in events:
        if ev["event"] != "report_zone" or ev.get("to") != "high_risk":
            continue
        for idx, comp in enumerate(completions):
            if idx in used:
                continue
            if comp["t"] >= ev["t"] - 1e-12:
                samples.append(round(comp["t"] - ev["t"], 9))
                used.add(idx)
                break
    return samples
