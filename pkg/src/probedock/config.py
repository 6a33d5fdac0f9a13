"""JSON configuration loading for plants and scenarios.

Two file kinds exist: a plant file (state-space matrices, trim airspeed,
camera mount offset, actuator limits) and a scenario file (everything a
single docking run needs). Parse failures always name the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .drogue import BowWaveParams, DrogueModel
from .dynamics import ActuatorLimits, PlantModel
from .errors import ConfigError
from .frames import CameraInstallation
from .inner_loop import LqrWeights
from .outer_loop import GAIN_PRESETS, OuterLoopGains
from .turbulence import PEAK_GUST_TARGET, TurbulenceLevel, as_turbulence_level

DEFAULT_PLANT_RESOURCE = "default_plant.json"


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}.{key} is missing")
    return mapping[key]


def _number(mapping: dict, key: str, where: str, default=None) -> float:
    value = mapping.get(key, default)
    if value is None:
        raise ConfigError(f"{where}.{key} is missing")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _vector(mapping: dict, key: str, length: int, where: str, default=None) -> np.ndarray:
    value = mapping.get(key, default)
    if value is None:
        raise ConfigError(f"{where}.{key} is missing")
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key} must be a list of {length} numbers")
    if arr.shape != (length,):
        raise ConfigError(f"{where}.{key} must have length {length}, got shape {arr.shape}")
    return arr


def _matrix(mapping: dict, key: str, shape: tuple[int, int], where: str) -> np.ndarray:
    value = _require(mapping, key, where)
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key} must be a nested list of numbers")
    if arr.shape != shape:
        raise ConfigError(f"{where}.{key} must have shape {shape}, got {arr.shape}")
    return arr


def plant_from_mapping(data: dict, where: str = "plant") -> PlantModel:
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a JSON object")
    limits_map = data.get("limits", {})
    if not isinstance(limits_map, dict):
        raise ConfigError(f"{where}.limits must be a JSON object")
    throttle = _vector(limits_map, "throttle_range", 2, f"{where}.limits", default=(-0.55, 0.45))
    try:
        limits = ActuatorLimits(
            elevator=np.deg2rad(_number(limits_map, "elevator_deg", f"{where}.limits", 25.0)),
            aileron=np.deg2rad(_number(limits_map, "aileron_deg", f"{where}.limits", 25.0)),
            rudder=np.deg2rad(_number(limits_map, "rudder_deg", f"{where}.limits", 25.0)),
            throttle=(float(throttle[0]), float(throttle[1])),
        )
        return PlantModel(
            a_lon=_matrix(data, "a_lon", (6, 6), where),
            b_lon=_matrix(data, "b_lon", (6, 2), where),
            a_lat=_matrix(data, "a_lat", (6, 6), where),
            b_lat=_matrix(data, "b_lat", (6, 2), where),
            trim_airspeed=_number(data, "trim_airspeed", where),
            mount_offset=_vector(data, "mount_offset", 3, where),
            limits=limits,
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")


def load_plant(path: str | Path) -> PlantModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"plant file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"plant file {path} is not valid JSON: {exc}")
    return plant_from_mapping(data, where=f"plant[{path.name}]")


def default_plant() -> PlantModel:
    text = resources.files("probedock").joinpath("data", DEFAULT_PLANT_RESOURCE).read_text()
    return plant_from_mapping(json.loads(text), where="plant[default]")


def _gains_from(value, where: str) -> OuterLoopGains:
    if isinstance(value, str):
        if value not in GAIN_PRESETS:
            names = ", ".join(sorted(GAIN_PRESETS))
            raise ConfigError(f"{where} names unknown preset {value!r}; expected {names}")
        return GAIN_PRESETS[value]
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a preset name or an object of gain values")
    known = {"lateral", "vertical", "depth", "brake_x", "brake_y", "closing_floor"}
    unknown = set(value) - known
    if unknown:
        raise ConfigError(f"{where} has unknown gain fields: {sorted(unknown)}")
    try:
        return OuterLoopGains(**{k: _number(value, k, where) for k in known})
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")


def _weights_from(value, where: str) -> LqrWeights:
    if value is None:
        return LqrWeights()
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be an object with q_lon/r_lon/q_lat/r_lat")
    kwargs = {}
    for key in ("q_lon", "r_lon", "q_lat", "r_lat"):
        if key in value:
            kwargs[key] = value[key]
    unknown = set(value) - {"q_lon", "r_lon", "q_lat", "r_lat"}
    if unknown:
        raise ConfigError(f"{where} has unknown weight fields: {sorted(unknown)}")
    try:
        return LqrWeights(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one docking run needs, resolved and validated."""

    plant: PlantModel
    name: str = "scenario"
    controller: str = "ibvs"
    gains: OuterLoopGains = field(default_factory=lambda: GAIN_PRESETS["table1"])
    weights: LqrWeights = field(default_factory=LqrWeights)
    turbulence_level: TurbulenceLevel = TurbulenceLevel.OFF
    turbulence_seed: int = 0
    bow_wave: BowWaveParams | None = None
    gust_gain: float = 0.05
    mount_offset_error: np.ndarray = field(default_factory=lambda: np.zeros(3))
    initial_relative_position: np.ndarray = field(
        default_factory=lambda: np.array([20.0, 0.6, -0.3])
    )
    capture_radius: float = 0.15
    max_duration: float = 120.0
    dt: float = 0.01
    closing_speed_bound: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "turbulence_level", as_turbulence_level(self.turbulence_level))
        object.__setattr__(
            self, "mount_offset_error", np.asarray(self.mount_offset_error, dtype=float)
        )
        object.__setattr__(
            self,
            "initial_relative_position",
            np.asarray(self.initial_relative_position, dtype=float),
        )
        if self.controller not in ("ibvs", "pbvs"):
            raise ConfigError(f"controller must be 'ibvs' or 'pbvs', got {self.controller!r}")
        if self.capture_radius <= 0:
            raise ConfigError("capture_radius must be positive")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.max_duration < 10 * self.dt:
            raise ConfigError("max_duration must cover at least ten steps")
        if self.initial_relative_position[0] <= 0:
            raise ConfigError("initial_relative_position must start ahead of the camera")
        if self.gust_gain < 0:
            raise ConfigError("gust_gain must be non-negative")

    def installation(self) -> CameraInstallation:
        return CameraInstallation(
            mount_offset=self.plant.mount_offset,
            mount_offset_error=self.mount_offset_error,
        )

    def drogue_model(self) -> DrogueModel:
        nominal = self.plant.mount_offset + self.initial_relative_position
        return DrogueModel(
            nominal_position=nominal,
            gust_gain=self.gust_gain,
            bow_wave=self.bow_wave,
            trim_airspeed=self.plant.trim_airspeed,
        )

    def disturbance_speed_bound(self) -> float:
        """Worst-case drogue speed implied by the enabled disturbances, used
        to sanity-check the outer chase gains."""
        if self.closing_speed_bound is not None:
            return self.closing_speed_bound
        bound = self.gust_gain * PEAK_GUST_TARGET[self.turbulence_level]
        if self.bow_wave is not None:
            bound += self.bow_wave.strength
        return bound


def scenario_from_mapping(data: dict, base_dir: str | Path | None = None) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    where = "scenario"
    known = {
        "name", "plant", "controller", "gains", "weights", "turbulence",
        "bow_wave", "gust_gain", "mount_offset", "mount_offset_error",
        "initial_relative_position", "capture_radius", "max_duration", "dt",
        "closing_speed_bound",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{where} has unknown fields: {sorted(unknown)}")

    plant_ref = data.get("plant", "default")
    if plant_ref == "default":
        plant = default_plant()
    elif isinstance(plant_ref, str):
        path = Path(plant_ref)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        plant = load_plant(path)
    elif isinstance(plant_ref, dict):
        plant = plant_from_mapping(plant_ref, where=f"{where}.plant")
    else:
        raise ConfigError(f"{where}.plant must be 'default', a path, or an inline object")
    if "mount_offset" in data:
        offset = _vector(data, "mount_offset", 3, where)
        plant = replace(plant, mount_offset=offset)

    turb = data.get("turbulence", {})
    if not isinstance(turb, dict):
        raise ConfigError(f"{where}.turbulence must be a JSON object")
    level_name = turb.get("level", "off")
    try:
        level = TurbulenceLevel(level_name)
    except ValueError:
        names = ", ".join(lv.value for lv in TurbulenceLevel)
        raise ConfigError(f"{where}.turbulence.level must be one of {names}, got {level_name!r}")
    seed = turb.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"{where}.turbulence.seed must be an integer")

    bow = data.get("bow_wave", {})
    if not isinstance(bow, dict):
        raise ConfigError(f"{where}.bow_wave must be a JSON object")
    bow_params = None
    if bow.get("enabled", False):
        try:
            bow_params = BowWaveParams(
                activation_radius=_number(
                    bow, "activation_radius", f"{where}.bow_wave", BowWaveParams.activation_radius
                ),
                strength=_number(bow, "strength", f"{where}.bow_wave", BowWaveParams.strength),
                decay_exponent=_number(
                    bow, "decay_exponent", f"{where}.bow_wave", BowWaveParams.decay_exponent
                ),
            )
        except ValueError as exc:
            raise ConfigError(f"{where}.bow_wave: {exc}")

    name = data.get("name", "scenario")
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{where}.name must be a non-empty string")

    bound = data.get("closing_speed_bound")
    if bound is not None and (isinstance(bound, bool) or not isinstance(bound, (int, float))):
        raise ConfigError(f"{where}.closing_speed_bound must be a number")

    return ScenarioConfig(
        plant=plant,
        name=name,
        controller=data.get("controller", "ibvs"),
        gains=_gains_from(data.get("gains", "table1"), f"{where}.gains"),
        weights=_weights_from(data.get("weights"), f"{where}.weights"),
        turbulence_level=level,
        turbulence_seed=seed,
        bow_wave=bow_params,
        gust_gain=_number(data, "gust_gain", where, 0.05),
        mount_offset_error=_vector(data, "mount_offset_error", 3, where, default=(0.0, 0.0, 0.0)),
        initial_relative_position=_vector(
            data, "initial_relative_position", 3, where, default=(20.0, 0.6, -0.3)
        ),
        capture_radius=_number(data, "capture_radius", where, 0.15),
        max_duration=_number(data, "max_duration", where, 120.0),
        dt=_number(data, "dt", where, 0.01),
        closing_speed_bound=None if bound is None else float(bound),
    )


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file {path} is not valid JSON: {exc}")
    return scenario_from_mapping(data, base_dir=path.parent)
