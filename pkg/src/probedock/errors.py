"""Shared exception types.

Kept in one place so the CLI can map them onto exit codes without importing
half the package.
"""


class BehindCameraError(ValueError):
    """Projection requested for a point at non-positive depth."""


class ConfigError(ValueError):
    """Malformed plant or scenario file; message names the offending field."""


class CareSolverError(RuntimeError):
    """Riccati iteration failed to converge or the problem is ill-posed."""


class SynthesisError(RuntimeError):
    """Gain synthesis impossible (unstabilizable pair, non-Hurwitz result)."""


class DivergedError(RuntimeError):
    """Simulation state became non-finite."""
