import json

import numpy as np
import pytest

from probedock.config import (
    ScenarioConfig,
    default_plant,
    load_plant,
    load_scenario,
    scenario_from_mapping,
)
from probedock.errors import ConfigError
from probedock.outer_loop import GAIN_PRESETS
from probedock.turbulence import TurbulenceLevel


def test_default_plant_loads_with_expected_trim():
    plant = default_plant()
    assert plant.trim_airspeed == 120.0
    assert np.allclose(plant.mount_offset, [2.0, 0.0, 0.5])
    assert plant.limits.elevator == pytest.approx(np.deg2rad(25.0))


def test_load_plant_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_plant(tmp_path / "nope.json")


def test_load_plant_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_plant(path)


def test_load_plant_names_missing_field(tmp_path):
    data = _default_plant_mapping()
    del data["a_lat"]
    path = tmp_path / "plant.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError, match=r"a_lat is missing"):
        load_plant(path)


def _default_plant_mapping():
    from importlib import resources

    text = resources.files("probedock").joinpath("data", "default_plant.json").read_text()
    return json.loads(text)


def test_load_plant_names_bad_shape(tmp_path):
    data = _default_plant_mapping()
    data["b_lon"] = [[0.0, 0.0]]
    path = tmp_path / "plant.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError, match=r"b_lon must have shape"):
        load_plant(path)


def test_scenario_defaults():
    cfg = scenario_from_mapping({})
    assert cfg.controller == "ibvs"
    assert cfg.gains == GAIN_PRESETS["table1"]
    assert cfg.turbulence_level is TurbulenceLevel.OFF
    assert cfg.bow_wave is None
    assert cfg.capture_radius == 0.15
    assert cfg.dt == 0.01
    assert np.allclose(cfg.initial_relative_position, [20.0, 0.6, -0.3])
    assert cfg.gust_gain == 0.05


def test_scenario_rejects_unknown_fields():
    with pytest.raises(ConfigError, match="unknown fields"):
        scenario_from_mapping({"turbulenz": {}})


def test_scenario_rejects_bad_controller():
    with pytest.raises(ConfigError, match="controller"):
        scenario_from_mapping({"controller": "homography"})


def test_scenario_rejects_bad_turbulence_level():
    with pytest.raises(ConfigError, match="turbulence.level"):
        scenario_from_mapping({"turbulence": {"level": "level_III"}})


def test_scenario_rejects_unknown_gain_preset():
    with pytest.raises(ConfigError, match="unknown preset"):
        scenario_from_mapping({"gains": "table9"})


def test_scenario_inline_gains_and_missing_field():
    cfg = scenario_from_mapping(
        {
            "gains": {
                "lateral": 2.0,
                "vertical": 2.0,
                "depth": 0.4,
                "brake_x": 3.0,
                "brake_y": 1.0,
                "closing_floor": -0.4,
            }
        }
    )
    assert cfg.gains.depth == 0.4
    with pytest.raises(ConfigError, match=r"gains\.closing_floor is missing"):
        scenario_from_mapping({"gains": {"lateral": 1.0, "vertical": 1.0, "depth": 0.1,
                                          "brake_x": 1.0, "brake_y": 1.0}})


def test_scenario_weight_lists_are_diagonals():
    cfg = scenario_from_mapping({"weights": {"q_lat": [0, 1, 0, 1, 1, 1, 20]}})
    assert cfg.weights.q_lat[6, 6] == 20.0


def test_scenario_bow_wave_block():
    cfg = scenario_from_mapping(
        {"bow_wave": {"enabled": True, "strength": 0.8}}
    )
    assert cfg.bow_wave is not None
    assert cfg.bow_wave.strength == 0.8
    assert cfg.bow_wave.activation_radius == 4.0
    assert scenario_from_mapping({"bow_wave": {"enabled": False}}).bow_wave is None


def test_scenario_mount_offset_override_rebuilds_outputs():
    cfg = scenario_from_mapping({"mount_offset": [1.0, 0.0, 0.0]})
    assert np.allclose(cfg.plant.mount_offset, [1.0, 0.0, 0.0])
    assert cfg.plant.c_lon()[0, 5] == pytest.approx(-1.0)
    install = cfg.installation()
    assert np.allclose(install.mount_offset, [1.0, 0.0, 0.0])


def test_scenario_drogue_model_places_drogue_ahead_of_camera():
    cfg = scenario_from_mapping({"initial_relative_position": [15.0, 1.0, 0.5]})
    drogue = cfg.drogue_model()
    assert np.allclose(
        drogue.nominal_position, cfg.plant.mount_offset + np.array([15.0, 1.0, 0.5])
    )
    assert drogue.trim_airspeed == cfg.plant.trim_airspeed


def test_scenario_validation_errors():
    with pytest.raises(ConfigError, match="capture_radius"):
        scenario_from_mapping({"capture_radius": 0.0})
    with pytest.raises(ConfigError, match="ten steps"):
        scenario_from_mapping({"max_duration": 0.05})
    with pytest.raises(ConfigError, match="ahead of the camera"):
        scenario_from_mapping({"initial_relative_position": [-5.0, 0.0, 0.0]})


def test_disturbance_bound_tracks_enabled_sources():
    quiet = scenario_from_mapping({})
    assert quiet.disturbance_speed_bound() == 0.0
    gusty = scenario_from_mapping({"turbulence": {"level": "level_I"}, "gust_gain": 0.2})
    assert gusty.disturbance_speed_bound() == pytest.approx(0.2 * 1.524)
    both = scenario_from_mapping(
        {"turbulence": {"level": "level_I"}, "bow_wave": {"enabled": True}}
    )
    assert both.disturbance_speed_bound() == pytest.approx(0.05 * 1.524 + 0.3)
    pinned = scenario_from_mapping({"closing_speed_bound": 1.25})
    assert pinned.disturbance_speed_bound() == 1.25


def test_load_scenario_round_trip(tmp_path):
    plant_path = tmp_path / "plant.json"
    plant_path.write_text(json.dumps(_default_plant_mapping()))
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(
        json.dumps(
            {
                "name": "roundtrip",
                "plant": "plant.json",
                "controller": "pbvs",
                "turbulence": {"level": "level_II", "seed": 7},
                "dt": 0.02,
            }
        )
    )
    cfg = load_scenario(scenario_path)
    assert cfg.name == "roundtrip"
    assert cfg.controller == "pbvs"
    assert cfg.turbulence_level is TurbulenceLevel.LEVEL_II
    assert cfg.turbulence_seed == 7
    assert cfg.dt == 0.02
    assert cfg.plant.trim_airspeed == 120.0


def test_scenario_config_direct_construction_validates():
    with pytest.raises(ConfigError):
        ScenarioConfig(plant=default_plant(), controller="other")
