"""Command-line front end.

Subcommands: run one scenario, batch over seeds, synthesize and print inner
gains, validate a config. Exit codes are the machine contract: 0 success,
2 clean failed docking, 1 usage or config error. Output files are a pure
function of (config, flags, seed), so repeated invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_scenario, scenario_from_mapping
from .csvlog import write_log_csv
from .drogue import BowWaveParams
from .errors import CareSolverError, ConfigError, SynthesisError
from .inner_loop import format_synthesis_report, synthesize_gains
from .outer_loop import GAIN_PRESETS
from .scenario import run_batch, run_scenario

OUTPUT_DIR_ENV = "PROBEDOCK_OUT"

_TURBULENCE_FLAG = {"off": "off", "1": "level_I", "2": "level_II"}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; 2 is reserved for failed
    docking here, so usage errors must exit 1 instead."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="probedock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_seed):
        p.add_argument("--config", help="scenario config JSON (defaults apply if omitted)")
        p.add_argument(
            "--out",
            default=None,
            help=f"output directory (default: ${OUTPUT_DIR_ENV} or current directory)",
        )
        p.add_argument("--controller", choices=("ibvs", "pbvs"))
        p.add_argument(
            "--turbulence", choices=tuple(_TURBULENCE_FLAG), help="gust level: off, 1 or 2"
        )
        p.add_argument("--bow-wave", action="store_true", help="enable the bow-wave model")
        p.add_argument(
            "--pose-error", metavar="x,y,z", help="camera mount offset error, metres"
        )
        p.add_argument("--gains", choices=tuple(GAIN_PRESETS))
        if with_seed:
            p.add_argument("--seed", type=int, default=None, help="gust seed")

    run_p = sub.add_parser("run", help="run one docking scenario")
    add_common(run_p, with_seed=True)

    batch_p = sub.add_parser("batch", help="run a seeded batch and summarize")
    add_common(batch_p, with_seed=False)
    batch_p.add_argument("--seeds", type=int, default=20, metavar="N", help="run seeds 0..N-1")

    synth_p = sub.add_parser("synth", help="synthesize inner-loop gains and report")
    synth_p.add_argument("--config", help="scenario config JSON supplying plant and weights")

    val_p = sub.add_parser("validate", help="check a config file and exit")
    val_p.add_argument("--config", required=True)

    return parser


def _load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return scenario_from_mapping({})
    return load_scenario(path)


def _parse_pose_error(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("--pose-error expects three comma-separated numbers, e.g. 1,0,-0.5")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise ConfigError(f"--pose-error components must be numeric, got {text!r}")


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    updates = {}
    if args.controller:
        updates["controller"] = args.controller
    if args.turbulence:
        updates["turbulence_level"] = _TURBULENCE_FLAG[args.turbulence]
    if args.bow_wave:
        updates["bow_wave"] = config.bow_wave or BowWaveParams()
    if args.pose_error:
        updates["mount_offset_error"] = _parse_pose_error(args.pose_error)
    if args.gains:
        updates["gains"] = GAIN_PRESETS[args.gains]
    seed = getattr(args, "seed", None)
    if seed is not None:
        updates["turbulence_seed"] = seed
    return replace(config, **updates) if updates else config


def _provenance(config: ScenarioConfig) -> str:
    dp = ",".join(f"{v:g}" for v in config.mount_offset_error)
    gains = config.gains
    preset = next(
        (name for name, preset in GAIN_PRESETS.items() if preset == gains), "custom"
    )
    bow = "on" if config.bow_wave is not None else "off"
    return (
        f"scenario={config.name} controller={config.controller} gains={preset} "
        f"turbulence={config.turbulence_level.value} seed={config.turbulence_seed} "
        f"bow_wave={bow} pose_error={dp}"
    )


def _output_dir(args) -> Path:
    if args.out is not None:
        base = Path(args.out)
    else:
        base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    base.mkdir(parents=True, exist_ok=True)
    return base


def _format_float(value: float) -> str:
    return f"{value:.6f}" if np.isfinite(value) else "nan"


def _outcome_text(config: ScenarioConfig, outcome, log) -> str:
    lines = [
        f"scenario: {config.name}",
        f"seed: {config.turbulence_seed}",
        f"success: {'yes' if outcome.success else 'no'}",
        f"failure_reason: {outcome.failure_reason or 'none'}",
        f"miss_distance_m: {_format_float(outcome.miss_distance)}",
        f"closing_speed_mps: {_format_float(outcome.closing_speed)}",
        f"time_of_contact_s: {_format_float(outcome.time_of_contact)}",
        f"saturation_fraction: {log.saturation_fraction():.4f}",
        f"steps: {len(log)}",
    ]
    return "\n".join(lines) + "\n"


def _write_run_outputs(out_dir: Path, config: ScenarioConfig, log, outcome) -> Path:
    stem = f"{config.name}-{config.turbulence_seed}"
    write_log_csv(log, out_dir / f"{stem}.csv", _provenance(config))
    outcome_path = out_dir / f"{stem}.outcome.txt"
    outcome_path.write_text(_outcome_text(config, outcome, log), encoding="utf-8")
    return outcome_path


def _cmd_run(args) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    out_dir = _output_dir(args)
    log, outcome = run_scenario(config)
    _write_run_outputs(out_dir, config, log, outcome)
    status = "success" if outcome.success else f"failed ({outcome.failure_reason})"
    print(f"{config.name} seed {config.turbulence_seed}: {status}, "
          f"miss {_format_float(outcome.miss_distance)} m")
    return 0 if outcome.success else 2


def _cmd_batch(args) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    if args.seeds < 1:
        raise ConfigError("--seeds must be at least 1")
    out_dir = _output_dir(args)

    def persist(run_config, log, outcome):
        _write_run_outputs(out_dir, run_config, log, outcome)

    summary = run_batch(config, range(args.seeds), on_result=persist)
    lines = [
        f"scenario: {config.name}",
        f"seeds: {len(summary.seeds)}",
        f"success_rate: {summary.success_rate:.4f}",
        f"miss_mean_m: {_format_float(summary.miss_mean)}",
        f"miss_median_m: {_format_float(summary.miss_median)}",
        f"miss_max_m: {_format_float(summary.miss_max)}",
        f"errors: {len(summary.errors)}",
    ]
    for seed in sorted(summary.errors):
        lines.append(f"error_seed_{seed}: {summary.errors[seed]}")
    (out_dir / f"{config.name}-summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return 1 if summary.errors else 0


def _cmd_synth(args) -> int:
    config = _load_config(args.config)
    gains = synthesize_gains(config.plant, config.weights)
    print(format_synthesis_report(gains))
    return 0


def _cmd_validate(args) -> int:
    config = load_scenario(args.config)
    print(f"ok: scenario {config.name!r} "
          f"(controller {config.controller}, dt {config.dt} s, "
          f"turbulence {config.turbulence_level.value})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "run": _cmd_run,
        "batch": _cmd_batch,
        "synth": _cmd_synth,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, SynthesisError, CareSolverError) as exc:
        print(f"probedock {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
