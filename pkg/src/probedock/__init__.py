"""Probe-drogue docking simulation: visual-servo outer loops, LQI inner loops."""

from .config import (
    ScenarioConfig,
    default_plant,
    load_plant,
    load_scenario,
    plant_from_mapping,
    scenario_from_mapping,
)
from .csvlog import read_log_csv, render_log_csv, write_log_csv
from .drogue import BowWaveParams, DrogueModel, bow_wave_velocity, drogue_velocity
from .dynamics import (
    ActuatorLimits,
    ControlInput,
    PlantModel,
    ReceiverState,
    camera_position,
    camera_velocity,
    step_receiver,
)
from .errors import (
    BehindCameraError,
    CareSolverError,
    ConfigError,
    DivergedError,
    SynthesisError,
)
from .frames import (
    DEFAULT_FRAME_ROTATION,
    CameraInstallation,
    ImageError,
    ImagePoint,
    RelativeGeometry,
    image_error,
    image_error_rate,
    interaction_matrix,
    project,
    relative_geometry,
)
from .inner_loop import (
    GainSet,
    IntegratorState,
    LqrWeights,
    augment,
    care_residual,
    format_synthesis_report,
    inner_control,
    solve_care,
    synthesize_gains,
    update_integrator,
)
from .outer_loop import (
    GAIN_PRESETS,
    DesiredCameraVelocity,
    OuterLoopGains,
    ibvs_outer,
    pbvs_outer,
    to_channel_references,
)
from .scenario import (
    LOG_COLUMNS,
    BatchSummary,
    DockingOutcome,
    SimLog,
    detect_docking,
    run_batch,
    run_scenario,
)
from .turbulence import TurbulenceLevel, TurbulenceModel, sample_gust

__all__ = [
    "ActuatorLimits",
    "BatchSummary",
    "BehindCameraError",
    "BowWaveParams",
    "CameraInstallation",
    "CareSolverError",
    "ConfigError",
    "ControlInput",
    "DEFAULT_FRAME_ROTATION",
    "DesiredCameraVelocity",
    "DivergedError",
    "DockingOutcome",
    "DrogueModel",
    "GAIN_PRESETS",
    "GainSet",
    "ImageError",
    "ImagePoint",
    "IntegratorState",
    "LOG_COLUMNS",
    "LqrWeights",
    "OuterLoopGains",
    "PlantModel",
    "ReceiverState",
    "RelativeGeometry",
    "ScenarioConfig",
    "SimLog",
    "SynthesisError",
    "TurbulenceLevel",
    "TurbulenceModel",
    "augment",
    "bow_wave_velocity",
    "camera_position",
    "camera_velocity",
    "care_residual",
    "default_plant",
    "detect_docking",
    "drogue_velocity",
    "format_synthesis_report",
    "ibvs_outer",
    "image_error",
    "image_error_rate",
    "inner_control",
    "interaction_matrix",
    "load_plant",
    "load_scenario",
    "pbvs_outer",
    "plant_from_mapping",
    "project",
    "read_log_csv",
    "relative_geometry",
    "render_log_csv",
    "run_batch",
    "run_scenario",
    "sample_gust",
    "scenario_from_mapping",
    "solve_care",
    "step_receiver",
    "synthesize_gains",
    "to_channel_references",
    "update_integrator",
    "write_log_csv",
]
