"""Regenerate the UI test fixtures from the simulator's wire formats.

Run from the repo root after changing the telemetry schema:

    python frontend/scripts/make_fixtures.py

Fixtures are committed so the frontend tests run without the backend.
"""

import json
import os
import sys

from ssmsim.config import bundled_scenario_path, load_scenario, parse_scenario
from ssmsim.serve import ServeSession
from ssmsim.simulator import Simulation

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")


def telemetry_frames():
    """A spread of snapshots: moving, slowed, stopped, multi-operator."""
    frames = []

    sim = Simulation(load_scenario(bundled_scenario_path("two_operators")))
    for step in range(240):
        sim.step()
        if step in (30, 120, 200):
            frames.append(sim.snapshot())

    sim = Simulation(load_scenario(bundled_scenario_path("exp3_stop")))
    stopped_frame = None
    for _ in range(240):
        sim.step()
        snap = sim.snapshot()
        if snap["robot"]["stopped"]:
            stopped_frame = snap
            break
    assert stopped_frame is not None, "exp3 never stopped?"
    frames.append(stopped_frame)

    sim = Simulation(load_scenario(bundled_scenario_path("exp1_zones")))
    for step in range(400):
        sim.step()
        if step in (60, 320):
            frames.append(sim.snapshot())

    zones = {op["zone"] for f in frames for op in f["operators"]}
    assert zones == {"safe", "low_risk", "high_risk"}, zones
    return frames


BASE_RAW = {
    "id": "parity", "seed": 21, "duration": 60.0, "mode": "static_ssm",
    "camera": {"position": [1200, 0]},
    "robot": {"base": [0, 0], "base_yaw_deg": 180},
    "operators": [{"id": 1, "height": 1700, "speed": 0.0, "start": [2000, 0]}],
}

DRAGS = [(12, [700.0, 0.0]), (45, [1200.0, 0.0]), (80, [2000.0, 0.0]),
         (110, [650.0, 100.0]), (150, [1800.0, -200.0])]
TOTAL_STEPS = 200


def parity_fixtures():
    session = ServeSession(parse_scenario(BASE_RAW))
    for step in range(TOTAL_STEPS):
        for at_step, position in DRAGS:
            if at_step == step:
                reply = session.submit({"v": 1, "type": "drag", "id": 1,
                                        "position": position})
                assert reply["type"] == "ack", reply
        session.step()
    live = [e for e in session.sim.events if e["event"] == "command"]

    dt = 1.0 / 60.0
    scripted_raw = dict(BASE_RAW)
    scripted_raw["operators"] = [{
        "id": 1, "height": 1700, "speed": 0.0, "start": [2000, 0],
        "moves": [{"t": (at_step + 0.5) * dt, "position": position}
                  for at_step, position in DRAGS],
    }]
    sim = Simulation(parse_scenario(scripted_raw))
    for _ in range(TOTAL_STEPS):
        sim.step()
    scripted = [e for e in sim.events if e["event"] == "command"]

    assert live == scripted, "drag parity broken at the source"
    assert len(live) >= 5
    return live, scripted


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    frames = telemetry_frames()
    live, scripted = parity_fixtures()
    with open(os.path.join(FIXTURES, "telemetry_frames.json"), "w") as fh:
        json.dump(frames, fh, indent=1)
        fh.write("\n")
    with open(os.path.join(FIXTURES, "parity_live_commands.json"), "w") as fh:
        json.dump(live, fh, indent=1)
        fh.write("\n")
    with open(os.path.join(FIXTURES, "parity_scripted_commands.json"), "w") as fh:
        json.dump(scripted, fh, indent=1)
        fh.write("\n")
    print(f"wrote {len(frames)} telemetry frames, "
          f"{len(live)} live / {len(scripted)} scripted commands")


if __name__ == "__main__":
    sys.exit(main())
