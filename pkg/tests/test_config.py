import math
import textwrap

import pytest

from ssmsim.config import (ConfigError, bundled_scenario_path, list_bundled_scenarios,
                           load_scenario, parse_scenario)
from ssmsim.monitor import OperationMode


def write(tmp_path, body):
    path = tmp_path / "scenario.yaml"
    path.write_text(textwrap.dedent(body), encoding="utf-8")
    return path


MINIMAL = """
    version: 1
    id: t
    operators:
      - id: 1
        start: [1000, 0]
"""


class TestLoadScenario:
    def test_minimal_file_gets_defaults(self, tmp_path):
        config = load_scenario(write(tmp_path, MINIMAL))
        assert config.scenario_id == "t"
        assert config.fps == 60.0
        assert config.mode == OperationMode.STATIC_SSM
        assert config.ssm.v_h == 1600.0
        assert config.latency.perception == pytest.approx(0.0167)
        assert config.dt == pytest.approx(1.0 / 60.0)
        assert len(config.robot.routine) == 6

    def test_missing_file_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_scenario(tmp_path / "nope.yaml")

    def test_yaml_syntax_error_keeps_location(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("operators:\n  - id: 1\n   start: [0, 0]\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="line"):
            load_scenario(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ConfigError, match="empty"):
            load_scenario(path)


class TestFieldValidation:
    def test_error_carries_field_path(self):
        with pytest.raises(ConfigError, match=r"operators\[0\]\.speed"):
            parse_scenario({"operators": [{"id": 1, "start": [0, 0], "speed": -5}]})

    def test_unknown_mode_lists_choices(self):
        with pytest.raises(ConfigError, match="static_ssm"):
            parse_scenario({"mode": "warp"})

    def test_routine_rows_validated(self):
        with pytest.raises(ConfigError, match=r"routine\[1\]"):
            parse_scenario({"robot": {"routine": [[0, 0, 0, 0, 0, 0], [1, 2, 3]]}})

    def test_routine_degrees_converted(self):
        config = parse_scenario({"robot": {"routine": [[90, 0, 0, 0, 0, 0],
                                                       [0, 0, 0, 0, 0, 0]]}})
        assert config.robot.routine[0][0] == pytest.approx(math.pi / 2)

    def test_duplicate_operator_ids_rejected(self):
        ops = [{"id": 1, "start": [0, 0]}, {"id": 1, "start": [1, 1]}]
        with pytest.raises(ConfigError, match="duplicate"):
            parse_scenario({"operators": ops})

    def test_waypoint_dwell_parsed(self):
        config = parse_scenario({"operators": [
            {"id": 1, "start": [0, 0], "waypoints": [[10, 20], [30, 40, 1.5]]}
        ]})
        assert config.operators[0].waypoints == ((10.0, 20.0, 0.0), (30.0, 40.0, 1.5))

    def test_negative_dwell_rejected(self):
        with pytest.raises(ConfigError, match="dwell"):
            parse_scenario({"operators": [
                {"id": 1, "start": [0, 0], "waypoints": [[10, 20, -1.0]]}
            ]})

    def test_probability_range_enforced(self):
        with pytest.raises(ConfigError, match="miss_probability"):
            parse_scenario({"noise": {"miss_probability": 1.5}})

    def test_moves_sorted_by_time(self):
        config = parse_scenario({"operators": [
            {"id": 1, "start": [0, 0],
             "moves": [{"t": 2.0, "position": [5, 5]}, {"t": 1.0, "position": [1, 1]}]}
        ]})
        assert [m.t for m in config.operators[0].moves] == [1.0, 2.0]

    def test_ssm_parameters_validated(self):
        with pytest.raises(ConfigError, match="config.ssm"):
            parse_scenario({"ssm": {"v_h": -10}})

    def test_wrong_type_reports_expected(self):
        with pytest.raises(ConfigError, match="expected"):
            parse_scenario({"duration": "long"})


class TestBundledScenarios:
    def test_all_bundled_scenarios_load(self):
        names = list_bundled_scenarios()
        assert "exp1_zones" in names
        assert "exp2_reaction" in names
        assert "exp3_stop" in names
        for name in names:
            config = load_scenario(bundled_scenario_path(name))
            assert config.scenario_id == name

    def test_experiment_modes(self):
        assert load_scenario(bundled_scenario_path("exp1_zones")).mode == OperationMode.STATIC_SSM
        assert (load_scenario(bundled_scenario_path("dynamic_zones")).mode
                == OperationMode.DYNAMIC_ZONES)
        assert (load_scenario(bundled_scenario_path("obstacle_avoidance")).mode
                == OperationMode.OBSTACLE_AVOIDANCE)
