"""Scenario loading and validation tests."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from evhres.errors import InvalidParameterError
from evhres.scenario import bundled_scenario_text, load_scenario, parse_scenario


@pytest.fixture()
def valencia_raw():
    return json.loads(bundled_scenario_text("valencia"))


class TestLoading:
    def test_bundled_by_name(self, valencia):
        assert valencia.name == "valencia"
        assert len(valencia.ev_classes) == 3
        assert valencia.menu.size == 80
        assert len(valencia.scenario_hash) == 16

    def test_repo_copy_matches_bundled_dataset(self):
        repo_copy = Path(__file__).resolve().parent.parent / "scenarios" / "valencia.json"
        assert json.loads(repo_copy.read_text()) == json.loads(bundled_scenario_text("valencia"))

    def test_unknown_bundled_name_rejected(self):
        with pytest.raises(InvalidParameterError, match="no bundled scenario"):
            load_scenario("atlantis")

    def test_missing_file_rejected(self):
        with pytest.raises(InvalidParameterError, match="not found"):
            load_scenario("does/not/exist.json")

    def test_load_from_path(self, tmp_path, valencia_raw):
        path = tmp_path / "copy.json"
        path.write_text(json.dumps(valencia_raw))
        scenario = load_scenario(path)
        assert scenario.name == "valencia"

    def test_hash_changes_with_content(self, valencia_raw):
        base = parse_scenario(valencia_raw)
        valencia_raw["economics"]["grid_price_per_kwh"] = 0.16
        changed = parse_scenario(valencia_raw)
        assert base.scenario_hash != changed.scenario_hash


class TestValidation:
    def test_bad_weights_name_the_field(self, valencia_raw):
        valencia_raw["weights"] = {"emr": 0.5, "reg": 0.5, "ecf": 0.5, "ss": 0.5, "esa": 0.5}
        with pytest.raises(InvalidParameterError, match="weights"):
            parse_scenario(valencia_raw)

    def test_bad_ev_class_names_the_entry(self, valencia_raw):
        valencia_raw["ev_classes"][1]["soc_init"] = 1.5
        with pytest.raises(InvalidParameterError, match=r"ev_classes\[1\]"):
            parse_scenario(valencia_raw)

    def test_missing_section_named(self, valencia_raw):
        del valencia_raw["economics"]
        with pytest.raises(InvalidParameterError, match="economics"):
            parse_scenario(valencia_raw)

    def test_empty_menu_rejected(self, valencia_raw):
        valencia_raw["menu"]["pv_kw"] = []
        with pytest.raises(InvalidParameterError, match="menu"):
            parse_scenario(valencia_raw)

    def test_missing_traffic_csv_rejected(self, valencia_raw, tmp_path):
        valencia_raw["traffic"] = {"csv": "nowhere.csv"}
        with pytest.raises(InvalidParameterError, match="traffic"):
            parse_scenario(valencia_raw, base_dir=tmp_path)

    def test_bad_shortage_rejected(self, valencia_raw):
        valencia_raw["max_shortage"] = 1.2
        with pytest.raises(InvalidParameterError, match="max_shortage"):
            parse_scenario(valencia_raw)

    def test_calibration_constants_live_in_the_dataset(self, valencia_raw):
        """The bundled dataset carries the tuned constants explicitly."""
        assert valencia_raw["solar"]["derate"] == 0.95
        assert valencia_raw["wind"]["power_curve"]["rated_ms"] > 0
        assert valencia_raw["economics"]["battery_unit_kwh"] > 0
        assert "diesel_min_load_fraction" in valencia_raw["dispatch"]
