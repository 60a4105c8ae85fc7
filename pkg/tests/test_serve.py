import json

import pytest

from ssmsim.config import parse_scenario
from ssmsim.serve import SCHEMA_VERSION, ServeSession, build_app
from ssmsim.simulator import Simulation

CAM = [1200.0, 0.0]


def base_raw(**overrides):
    raw = {
        "id": "live", "seed": 21, "duration": 60.0, "mode": "static_ssm",
        "camera": {"position": CAM},
        "robot": {"base": [0, 0], "base_yaw_deg": 180},
        "operators": [{"id": 1, "height": 1700, "speed": 0.0, "start": [2000, 0]}],
    }
    raw.update(overrides)
    return raw


def session_of(**overrides):
    return ServeSession(parse_scenario(base_raw(**overrides)))


class TestControlValidation:
    def test_malformed_message_rejected_session_preserved(self):
        session = session_of()
        reply = session.submit({"type": "drag", "id": "x", "position": [0, 0]})
        assert reply["type"] == "error"
        reply = session.submit(["not", "an", "object"])
        assert reply["type"] == "error"
        # session still works
        snapshot = session.step()
        assert snapshot["type"] == "telemetry"

    def test_unknown_type_rejected(self):
        reply = session_of().submit({"type": "warp_speed"})
        assert reply["type"] == "error"
        assert "warp_speed" in reply["error"]

    def test_valid_controls_acked(self):
        session = session_of()
        assert session.submit({"type": "drag", "id": 1,
                               "position": [700, 0]})["type"] == "ack"
        assert session.submit({"type": "set_mode",
                               "mode": "dynamic_zones"})["type"] == "ack"
        assert session.submit({"type": "pause"})["type"] == "ack"


class TestLiveBehavior:
    def test_drag_into_high_risk_stops_robot(self):
        session = session_of()
        for _ in range(5):
            session.step()
        session.submit({"type": "drag", "id": 1, "position": [700.0, 0.0]})
        stopped = False
        for _ in range(12):
            snapshot = session.step()
            if snapshot["command"]["stop"]:
                stopped = True
                break
        assert stopped

    def test_drag_out_resumes(self):
        session = session_of()
        session.submit({"type": "drag", "id": 1, "position": [700.0, 0.0]})
        for _ in range(12):
            session.step()
        assert session.sim.active_command.stop
        session.submit({"type": "drag", "id": 1, "position": [2000.0, 0.0]})
        resumed = False
        for _ in range(12):
            snapshot = session.step()
            if not snapshot["command"]["stop"] and snapshot["command"]["fraction"] == 1.0:
                resumed = True
        assert resumed

    def test_mode_switch_changes_command_table(self):
        session = session_of()
        session.submit({"type": "drag", "id": 1, "position": [700.0, 0.0]})
        for _ in range(12):
            session.step()
        assert session.sim.active_command.stop  # static mode stops in high risk
        session.submit({"type": "set_mode", "mode": "obstacle_avoidance"})
        for _ in range(12):
            snapshot = session.step()
        assert snapshot["command"]["fraction"] == 0.1
        assert snapshot["command"]["replan"]
        assert not snapshot["command"]["stop"]

    def test_add_and_remove_operator(self):
        session = session_of()
        session.submit({"type": "add_operator", "id": 7, "position": [1000, 200],
                        "height": 1650})
        for _ in range(5):
            snapshot = session.step()
        assert len(snapshot["operators"]) == 2
        session.submit({"type": "remove_operator", "id": 7})
        for _ in range(8):
            snapshot = session.step()
        assert len(snapshot["operators"]) == 1

    def test_pause_freezes_time(self):
        session = session_of()
        session.submit({"type": "pause"})
        first = session.step()
        second = session.step()
        assert first["step"] == second["step"]
        session.submit({"type": "resume"})
        third = session.step()
        assert third["step"] == second["step"] + 1

    def test_reset_restores_initial_state(self):
        session = session_of()
        for _ in range(30):
            session.step()
        session.submit({"type": "reset", "seed": 5})
        snapshot = session.step()
        assert snapshot["step"] == 1


class TestDragParity:
    def test_drag_session_equals_scripted_scenario(self):
        # the same trajectory expressed as live drags and as scripted
        # position overrides must produce identical command sequences
        dt = 1.0 / 60.0
        drags = [(12, [700.0, 0.0]), (40, [1200.0, 0.0]), (70, [2000.0, 0.0])]
        total_steps = 100

        session = session_of()
        live_commands = []
        for step in range(total_steps):
            for at_step, position in drags:
                if at_step == step:
                    session.submit({"type": "drag", "id": 1, "position": position})
            session.step()
            live_commands += [e for e in session.sim.events
                              if e["event"] == "command" and e not in live_commands]

        moves = [{"t": (at_step + 0.5) * dt, "position": position}
                 for at_step, position in drags]
        scripted = parse_scenario(base_raw(operators=[{
            "id": 1, "height": 1700, "speed": 0.0, "start": [2000, 0],
            "moves": moves,
        }]))
        sim = Simulation(scripted)
        for _ in range(total_steps):
            sim.step()
        scripted_commands = [e for e in sim.events if e["event"] == "command"]

        assert live_commands == scripted_commands
        assert len(live_commands) >= 3


class TestWebSocketEndpoint:
    @pytest.fixture
    def client(self):
        from starlette.testclient import TestClient
        session = session_of()
        app = build_app(session)
        with TestClient(app) as client:
            yield client, session

    def test_state_endpoint_serves_snapshot(self, client):
        http, session = client
        session.step()
        payload = http.get("/state").json()
        assert payload["type"] == "telemetry"
        assert payload["v"] == SCHEMA_VERSION
        assert payload["zones"]["s_a"] == pytest.approx(799.43)

    def test_websocket_hello_ack_and_error(self, client):
        http, session = client
        with http.websocket_connect("/ws") as ws:
            hello = json.loads(ws.receive_text())
            assert hello["type"] == "hello"
            assert hello["v"] == SCHEMA_VERSION
            ws.send_text(json.dumps({"type": "pause"}))
            reply = json.loads(ws.receive_text())
            assert reply["type"] == "ack"
            ws.send_text("{not json")
            reply = json.loads(ws.receive_text())
            assert reply["type"] == "error"

    def test_broadcast_reaches_subscriber(self, client):
        from ssmsim.serve import broadcast
        http, session = client
        with http.websocket_connect("/ws") as ws:
            json.loads(ws.receive_text())  # hello
            snapshot = session.step()
            broadcast(http.app, snapshot)
            frame = json.loads(ws.receive_text())
            assert frame["type"] == "telemetry"
            assert frame["step"] == snapshot["step"]
