"""Scenario configuration: schema, defaults, YAML loading and validation.

Configs are plain YAML. Validation errors carry the offending field path
(`operators[0].speed: ...`); YAML syntax errors keep the parser's line/column.
Angles in the routine are written in degrees for readability and converted
to radians on load.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .kinematics import DEFAULT_ROUTINE, NOMINAL_JOINT_SPEED_RAD_S
from .monitor import OperationMode
from .safety import DEFAULT_CLEARANCE_MM, SsmParameters

__all__ = ["ConfigError", "ScenarioConfig", "OperatorScript", "PositionOverride",
           "LatencyConfig", "NoiseConfig", "RobotConfig", "CameraConfig",
           "load_scenario", "parse_scenario"]


class ConfigError(ValueError):
    """Malformed scenario configuration; message includes the field path."""


@dataclass(frozen=True)
class PositionOverride:
    """Scripted teleport: the operator is placed at `position` at time t."""

    t: float
    position: tuple


@dataclass(frozen=True)
class OperatorScript:
    op_id: int
    height: float = 1700.0
    speed: float = 1600.0
    start: tuple = (0.0, 0.0)
    waypoints: tuple = ()  # (x, y, dwell_seconds) triples
    appear: float = 0.0
    disappear: Optional[float] = None
    at_end: str = "hold"  # hold | disappear | loop
    moves: tuple = ()     # PositionOverride list, applied at step boundaries


@dataclass(frozen=True)
class LatencyConfig:
    perception: float = 0.0167
    decision: float = 0.005
    actuation: float = 0.0066
    stop_ramp: float = 0.03
    decision_per_operator: float = 0.0

    @property
    def reaction_sum(self) -> float:
        return self.perception + self.decision + self.actuation


@dataclass(frozen=True)
class NoiseConfig:
    bbox_jitter_std: float = 0.0
    depth_noise_std: float = 0.0
    miss_probability: float = 0.0
    border_miss_band: float = 0.0

    @property
    def enabled(self) -> bool:
        return any((self.bbox_jitter_std, self.depth_noise_std,
                    self.miss_probability, self.border_miss_band))


@dataclass(frozen=True)
class RobotConfig:
    base: tuple = (0.0, 0.0)
    base_yaw: float = 0.0
    routine: tuple = tuple(tuple(q) for q in DEFAULT_ROUTINE)  # radians
    nominal_joint_speed: float = NOMINAL_JOINT_SPEED_RAD_S
    tool_length: float = 162.8


@dataclass(frozen=True)
class CameraConfig:
    position: tuple = (0.0, 0.0)
    mount_height: float = 3450.0


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str = "scenario"
    seed: int = 0
    fps: float = 60.0
    duration: float = 10.0
    mode: OperationMode = OperationMode.STATIC_SSM
    ssm: SsmParameters = field(default_factory=SsmParameters)
    clearance: float = DEFAULT_CLEARANCE_MM
    camera: CameraConfig = field(default_factory=CameraConfig)
    robot: RobotConfig = field(default_factory=RobotConfig)
    latency: LatencyConfig = field(default_factory=LatencyConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    tracker_max_misses: int = 3
    tracker_min_hits: int = 1
    tracker_iou_threshold: float = 0.3
    cylinder_radius: float = 300.0
    joint_msd: float = 200.0
    replan_margin: float = 100.0
    head_size: float = 200.0
    command_dwell: float = 0.0  # s; suppresses speed-up chatter, never delays a stop
    operators: tuple = ()

    @property
    def dt(self) -> float:
        return 1.0 / self.fps


def _expect(mapping, key, path, types, default=None, required=False):
    if key not in mapping:
        if required:
            raise ConfigError(f"{path}.{key}: missing required field")
        return default
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        raise ConfigError(
            f"{path}.{key}: expected {getattr(types, '__name__', types)}, "
            f"got {type(value).__name__} ({value!r})"
        )
    return value


def _number(mapping, key, path, default=None, required=False,
            minimum=None, maximum=None, strict_min=False):
    v = _expect(mapping, key, path, (int, float), default, required)
    if v is None:
        return None
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{path}.{key}: must be finite, got {v!r}")
    if minimum is not None and (v <= minimum if strict_min else v < minimum):
        op = ">" if strict_min else ">="
        raise ConfigError(f"{path}.{key}: must be {op} {minimum}, got {v}")
    if maximum is not None and v > maximum:
        raise ConfigError(f"{path}.{key}: must be <= {maximum}, got {v}")
    return v


def _point2(value, path) -> tuple:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ConfigError(f"{path}: expected [x, y] numbers, got {value!r}")
    return (float(value[0]), float(value[1]))


def _waypoint(value, path) -> tuple:
    """[x, y] or [x, y, dwell_seconds] -> (x, y, dwell)."""
    if (not isinstance(value, (list, tuple)) or len(value) not in (2, 3)
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ConfigError(f"{path}: expected [x, y] or [x, y, dwell_s], got {value!r}")
    dwell = float(value[2]) if len(value) == 3 else 0.0
    if dwell < 0:
        raise ConfigError(f"{path}: dwell must be >= 0, got {dwell}")
    return (float(value[0]), float(value[1]), dwell)


def _check_mapping(value, path):
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _parse_operator(raw, idx) -> OperatorScript:
    path = f"operators[{idx}]"
    _check_mapping(raw, path)
    op_id = _expect(raw, "id", path, int, required=True)
    if op_id < 0:
        raise ConfigError(f"{path}.id: must be >= 0, got {op_id}")
    start = _point2(_expect(raw, "start", path, (list, tuple), required=True), f"{path}.start")
    waypoints = tuple(
        _waypoint(w, f"{path}.waypoints[{i}]")
        for i, w in enumerate(_expect(raw, "waypoints", path, (list, tuple), default=()))
    )
    at_end = _expect(raw, "at_end", path, str, default="hold")
    if at_end not in ("hold", "disappear", "loop"):
        raise ConfigError(f"{path}.at_end: expected hold|disappear|loop, got {at_end!r}")
    moves = []
    for i, mraw in enumerate(_expect(raw, "moves", path, (list, tuple), default=())):
        mpath = f"{path}.moves[{i}]"
        _check_mapping(mraw, mpath)
        moves.append(PositionOverride(
            t=_number(mraw, "t", mpath, required=True, minimum=0.0),
            position=_point2(_expect(mraw, "position", mpath, (list, tuple), required=True),
                             f"{mpath}.position"),
        ))
    disappear = _number(raw, "disappear", path, default=None, minimum=0.0)
    return OperatorScript(
        op_id=op_id,
        height=_number(raw, "height", path, default=1700.0, minimum=0.0, strict_min=True),
        speed=_number(raw, "speed", path, default=1600.0, minimum=0.0),
        start=start,
        waypoints=waypoints,
        appear=_number(raw, "appear", path, default=0.0, minimum=0.0),
        disappear=disappear,
        at_end=at_end,
        moves=tuple(sorted(moves, key=lambda m: m.t)),
    )


def _parse_routine(raw, path) -> tuple:
    if raw is None or raw == "default":
        return tuple(tuple(q) for q in DEFAULT_ROUTINE)
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(f"{path}: expected 'default' or a non-empty list of 6-angle rows")
    out = []
    for i, row in enumerate(raw):
        if (not isinstance(row, (list, tuple)) or len(row) != 6
                or not all(isinstance(a, (int, float)) for a in row)):
            raise ConfigError(f"{path}[{i}]: expected 6 joint angles in degrees")
        out.append(tuple(math.radians(float(a)) for a in row))
    return tuple(out)


def parse_scenario(raw: dict, scenario_id: str = "scenario") -> ScenarioConfig:
    """Validate a parsed YAML mapping into a ScenarioConfig."""
    _check_mapping(raw, "config")
    version = _expect(raw, "version", "config", int, default=1)
    if version != 1:
        raise ConfigError(f"config.version: unsupported version {version}")

    mode_raw = _expect(raw, "mode", "config", str, default="static_ssm")
    try:
        mode = OperationMode(mode_raw)
    except ValueError:
        valid = ", ".join(m.value for m in OperationMode)
        raise ConfigError(f"config.mode: expected one of {valid}, got {mode_raw!r}") from None

    ssm_raw = _check_mapping(raw.get("ssm", {}), "config.ssm")
    try:
        ssm = SsmParameters(
            v_h=_number(ssm_raw, "v_h", "config.ssm", default=1600.0),
            v_r=_number(ssm_raw, "v_r", "config.ssm", default=500.0),
            t_r=_number(ssm_raw, "t_r", "config.ssm", default=0.0283),
            t_s=_number(ssm_raw, "t_s", "config.ssm", default=0.4),
            c_intrusion=_number(ssm_raw, "c", "config.ssm", default=0.0),
            z_d=_number(ssm_raw, "z_d", "config.ssm", default=0.0),
            z_r=_number(ssm_raw, "z_r", "config.ssm", default=0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"config.ssm: {exc}") from None

    cam_raw = _check_mapping(raw.get("camera", {}), "config.camera")
    camera = CameraConfig(
        position=_point2(cam_raw.get("position", [0.0, 0.0]), "config.camera.position"),
        mount_height=_number(cam_raw, "mount_height", "config.camera",
                             default=3450.0, minimum=0.0, strict_min=True),
    )

    rob_raw = _check_mapping(raw.get("robot", {}), "config.robot")
    robot = RobotConfig(
        base=_point2(rob_raw.get("base", [0.0, 0.0]), "config.robot.base"),
        base_yaw=math.radians(_number(rob_raw, "base_yaw_deg", "config.robot", default=0.0)),
        routine=_parse_routine(rob_raw.get("routine", "default"), "config.robot.routine"),
        nominal_joint_speed=_number(rob_raw, "nominal_joint_speed", "config.robot",
                                    default=NOMINAL_JOINT_SPEED_RAD_S,
                                    minimum=0.0, strict_min=True),
        tool_length=_number(rob_raw, "tool_length", "config.robot",
                            default=162.8, minimum=0.0),
    )

    lat_raw = _check_mapping(raw.get("latency", {}), "config.latency")
    latency = LatencyConfig(
        perception=_number(lat_raw, "perception", "config.latency", default=0.0167, minimum=0.0),
        decision=_number(lat_raw, "decision", "config.latency", default=0.005, minimum=0.0),
        actuation=_number(lat_raw, "actuation", "config.latency", default=0.0066, minimum=0.0),
        stop_ramp=_number(lat_raw, "stop_ramp", "config.latency", default=0.03, minimum=0.0),
        decision_per_operator=_number(lat_raw, "decision_per_operator", "config.latency",
                                      default=0.0, minimum=0.0),
    )

    noise_raw = _check_mapping(raw.get("noise", {}), "config.noise")
    noise = NoiseConfig(
        bbox_jitter_std=_number(noise_raw, "bbox_jitter_std", "config.noise",
                                default=0.0, minimum=0.0),
        depth_noise_std=_number(noise_raw, "depth_noise_std", "config.noise",
                                default=0.0, minimum=0.0),
        miss_probability=_number(noise_raw, "miss_probability", "config.noise",
                                 default=0.0, minimum=0.0, maximum=1.0),
        border_miss_band=_number(noise_raw, "border_miss_band", "config.noise",
                                 default=0.0, minimum=0.0),
    )

    trk_raw = _check_mapping(raw.get("tracker", {}), "config.tracker")
    max_misses = _expect(trk_raw, "max_misses", "config.tracker", int, default=3)
    min_hits = _expect(trk_raw, "min_hits", "config.tracker", int, default=1)
    if max_misses < 1:
        raise ConfigError(f"config.tracker.max_misses: must be >= 1, got {max_misses}")
    if min_hits < 1:
        raise ConfigError(f"config.tracker.min_hits: must be >= 1, got {min_hits}")

    operators_raw = _expect(raw, "operators", "config", (list, tuple), default=())
    operators = tuple(_parse_operator(o, i) for i, o in enumerate(operators_raw))
    ids = [o.op_id for o in operators]
    if len(ids) != len(set(ids)):
        raise ConfigError("config.operators: duplicate operator ids")

    return ScenarioConfig(
        scenario_id=_expect(raw, "id", "config", str, default=scenario_id),
        seed=_expect(raw, "seed", "config", int, default=0),
        fps=_number(raw, "fps", "config", default=60.0, minimum=0.0, strict_min=True),
        duration=_number(raw, "duration", "config", default=10.0, minimum=0.0, strict_min=True),
        mode=mode,
        ssm=ssm,
        clearance=_number(raw, "clearance", "config", default=DEFAULT_CLEARANCE_MM),
        camera=camera,
        robot=robot,
        latency=latency,
        noise=noise,
        tracker_max_misses=max_misses,
        tracker_min_hits=min_hits,
        tracker_iou_threshold=_number(trk_raw, "iou_threshold", "config.tracker",
                                      default=0.3, minimum=0.0, maximum=1.0),
        cylinder_radius=_number(raw, "cylinder_radius", "config", default=300.0,
                                minimum=0.0, strict_min=True),
        joint_msd=_number(raw, "joint_msd", "config", default=200.0, minimum=0.0),
        replan_margin=_number(raw, "replan_margin", "config", default=100.0, minimum=0.0),
        head_size=_number(raw, "head_size", "config", default=200.0,
                          minimum=0.0, strict_min=True),
        command_dwell=_number(raw, "command_dwell", "config", default=0.0, minimum=0.0),
        operators=operators,
    )


def bundled_scenario_path(name: str) -> str:
    """Path of a scenario shipped with the package, e.g. 'exp1_zones'."""
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios", f"{name}.yaml")


def list_bundled_scenarios() -> list:
    folder = os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios")
    return sorted(
        os.path.splitext(f)[0] for f in os.listdir(folder) if f.endswith(".yaml")
    )


def load_scenario(path) -> ScenarioConfig:
    """Load and validate a scenario YAML file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if raw is None:
        raise ConfigError(f"config file {path} is empty")
    default_id = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_scenario(raw, scenario_id=default_id)
