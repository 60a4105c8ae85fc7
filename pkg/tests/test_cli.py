import json
import os

import pytest
from click.testing import CliRunner

from ssmsim.cli import main
from ssmsim.config import bundled_scenario_path


@pytest.fixture
def runner():
    return CliRunner()


class TestMsd:
    def test_default_numbers(self, runner):
        result = runner.invoke(main, ["msd"])
        assert result.exit_code == 0
        assert "S_a = 799.43 mm" in result.output
        assert "S_b = 1549.43 mm" in result.output
        assert "85.4 ms" in result.output  # (799.43 - 662.8) / 1600
        assert "PLc" in result.output

    def test_custom_parameters(self, runner):
        # 1600*0.1 + 500*0 + 500*0.1/2 = 185
        result = runner.invoke(main, ["msd", "--t-r", "0", "--t-s", "0.1"])
        assert result.exit_code == 0
        assert "S_a = 185.00 mm" in result.output

    def test_zero_boundary_is_rejected(self, runner):
        # a zero stop distance cannot define zones
        result = runner.invoke(main, ["msd", "--t-r", "0", "--t-s", "0"])
        assert result.exit_code != 0

    def test_clearance_violation_fails(self, runner):
        result = runner.invoke(main, ["msd", "--clearance", "300"])
        assert result.exit_code != 0

    def test_worst_hazard_gives_ple(self, runner):
        result = runner.invoke(main, [
            "msd", "--severity", "S2", "--frequency", "F2", "--avoidability", "P2"])
        assert "PLe" in result.output


class TestValidateConfig:
    def test_bundled_scenarios_validate(self, runner):
        result = runner.invoke(main, [
            "validate-config", "--config", bundled_scenario_path("exp1_zones")])
        assert result.exit_code == 0
        assert "OK" in result.output

    def test_missing_file_nonzero_exit(self, runner):
        result = runner.invoke(main, ["validate-config", "--config", "no-such.yaml"])
        assert result.exit_code == 2
        assert "not found" in result.output

    def test_bad_field_reports_path(self, runner, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("operators:\n  - id: 1\n    start: [0, 0]\n    speed: -4\n")
        result = runner.invoke(main, ["validate-config", "--config", str(path)])
        assert result.exit_code == 2
        assert "operators[0].speed" in result.output


class TestRun:
    def test_run_writes_outputs_and_exits_zero(self, runner, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(main, [
            "run", "--config", bundled_scenario_path("exp2_reaction"),
            "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "events.ndjson").exists()
        assert (out / "report.json").exists()
        assert (out / "metrics.csv").exists()
        report = json.loads((out / "report.json").read_text())
        assert len(report["reaction_time"]["samples_s"]) == 20

    def test_missing_config_exits_nonzero(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "--config", "missing.yaml",
                                      "--out-dir", str(tmp_path)])
        assert result.exit_code == 2

    def test_collision_scenario_exits_nonzero(self, runner, tmp_path):
        path = tmp_path / "collide.yaml"
        path.write_text(
            "id: collide\nduration: 2.0\n"
            "camera: {position: [1200, 0]}\n"
            "robot: {base: [0, 0], base_yaw_deg: 180}\n"
            "operators:\n"
            "  - id: 1\n    start: [1000, 0]\n    speed: 1600\n"
            "    waypoints: [[0, 0]]\n")
        result = runner.invoke(main, ["run", "--config", str(path),
                                      "--out-dir", str(tmp_path / "o")])
        assert result.exit_code == 1
        assert "collisions" in result.output

    def test_seed_and_mode_overrides(self, runner, tmp_path):
        result = runner.invoke(main, [
            "run", "--config", bundled_scenario_path("exp2_reaction"),
            "--seed", "99", "--mode", "obstacle_avoidance",
            "--out-dir", str(tmp_path / "o")])
        assert result.exit_code == 0, result.output
        header = json.loads(
            (tmp_path / "o" / "events.ndjson").read_text().splitlines()[0])
        assert header["seed"] == 99
        assert header["mode"] == "obstacle_avoidance"

    def test_determinism_byte_identical_logs(self, runner, tmp_path):
        paths = []
        for name in ("a", "b"):
            out = tmp_path / name
            result = runner.invoke(main, [
                "run", "--config", bundled_scenario_path("two_operators"),
                "--out-dir", str(out)])
            assert result.exit_code == 0
            paths.append(out / "events.ndjson")
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestReport:
    def test_rebuild_from_event_log(self, runner, tmp_path):
        out = tmp_path / "out"
        runner.invoke(main, ["run", "--config", bundled_scenario_path("exp3_stop"),
                             "--out-dir", str(out)])
        original = (out / "report.json").read_text()
        rebuilt_dir = tmp_path / "rebuilt"
        result = runner.invoke(main, [
            "report", "--events", str(out / "events.ndjson"),
            "--out-dir", str(rebuilt_dir)])
        assert result.exit_code == 0
        assert (rebuilt_dir / "report.json").read_text() == original

    def test_missing_log_nonzero(self, runner):
        result = runner.invoke(main, ["report", "--events", "none.ndjson"])
        assert result.exit_code == 2
