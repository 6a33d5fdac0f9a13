import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def run_csvs(tmp_path_factory):
    """Log CSVs for the standard comparison runs, produced through the
    simulator's command line (the only interface this package may use)."""
    base = tmp_path_factory.mktemp("runs")

    def run(name, *flags):
        out = base / name
        cmd = [
            sys.executable, "-m", "probedock.cli", "run",
            "--out", str(out), "--seed", "0", *flags,
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        # 2 is a clean failed docking (expected for the position-feedback
        # pose-error run); anything else is a harness problem.
        assert proc.returncode in (0, 2), proc.stderr
        return out / "scenario-0.csv"

    return {
        "nominal": run("nominal"),
        "turb1": run("turb1", "--turbulence", "1"),
        "turb2": run("turb2", "--turbulence", "2"),
        "bow": run("bow", "--gains", "table2", "--bow-wave"),
        "ibvs_dp": run("ibvs_dp", "--pose-error", "1,0,-0.5"),
        "pbvs_dp": run("pbvs_dp", "--controller", "pbvs", "--pose-error", "1,0,-0.5"),
    }
