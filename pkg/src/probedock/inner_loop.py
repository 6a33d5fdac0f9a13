"""Inner-loop gain synthesis and control law.

The inner loop makes the receiver's camera velocity track the outer-loop
command. Each channel gets integral action on the velocity tracking error,
and the state-plus-integrator gains come from an LQR design solved with a
Newton-Kleinman Riccati iteration.

The kinematic position states are excluded from the design system: the
velocity outputs are their exact derivatives (plus lever-arm terms that are
themselves derivatives of attitude combinations), so augmenting integrators
onto the full state pins an uncontrollable eigenvalue at zero. Synthesis
therefore runs on the position-free core and the resulting gains are
re-embedded with zero columns on the position states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .dynamics import LAT_CORE, LON_CORE, ControlInput, PlantModel, ReceiverState
from .errors import CareSolverError, SynthesisError

# User-facing weight dimensions: full channel state plus its integrators.
LON_WEIGHT_DIM = 8
LAT_WEIGHT_DIM = 7
_LON_POSITIONS = (0, 1)
_LAT_POSITIONS = (0,)


def _weight_matrix(name: str, value, dim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1 and arr.shape == (dim,):
        arr = np.diag(arr)
    if arr.shape != (dim, dim):
        raise ValueError(f"{name} must be a {dim}-vector diagonal or {dim}x{dim} matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if not np.allclose(arr, arr.T, atol=1e-9):
        raise ValueError(f"{name} must be symmetric")
    return arr


def _default_q_lon() -> np.ndarray:
    return np.diag([0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 10.0, 10.0])


def _default_q_lat() -> np.ndarray:
    return np.diag([0.0, 1.0, 0.0, 1.0, 1.0, 1.0, 10.0])


@dataclass(frozen=True)
class LqrWeights:
    """State/input weights per channel, sized for the full state plus the
    velocity-error integrators (longitudinal 6+2, lateral 6+1).

    Position-state weights must be zero; those states are excluded from
    synthesis (see the module docstring), so a nonzero weight there would be
    silently ignored, which we refuse instead.
    """

    q_lon: np.ndarray = field(default_factory=_default_q_lon)
    r_lon: np.ndarray = field(default_factory=lambda: np.eye(2))
    q_lat: np.ndarray = field(default_factory=_default_q_lat)
    r_lat: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        object.__setattr__(self, "q_lon", _weight_matrix("q_lon", self.q_lon, LON_WEIGHT_DIM))
        object.__setattr__(self, "r_lon", _weight_matrix("r_lon", self.r_lon, 2))
        object.__setattr__(self, "q_lat", _weight_matrix("q_lat", self.q_lat, LAT_WEIGHT_DIM))
        object.__setattr__(self, "r_lat", _weight_matrix("r_lat", self.r_lat, 2))
        for name, q, positions in (
            ("q_lon", self.q_lon, _LON_POSITIONS),
            ("q_lat", self.q_lat, _LAT_POSITIONS),
        ):
            if np.linalg.eigvalsh(q).min() < -1e-9:
                raise ValueError(f"{name} must be positive semidefinite")
            for idx in positions:
                if np.any(q[idx] != 0.0) or np.any(q[:, idx] != 0.0):
                    raise ValueError(
                        f"{name} must not weight position state {idx}; position "
                        "states are excluded from gain synthesis"
                    )
        for name, r in (("r_lon", self.r_lon), ("r_lat", self.r_lat)):
            if np.linalg.eigvalsh(r).min() <= 0.0:
                raise ValueError(f"{name} must be positive definite")

    def design_q(self, channel: str) -> np.ndarray:
        """Weight matrix restricted to the position-free design coordinates."""
        if channel == "lon":
            keep = list(LON_CORE) + [6, 7]
            return self.q_lon[np.ix_(keep, keep)]
        keep = list(LAT_CORE) + [6]
        return self.q_lat[np.ix_(keep, keep)]


@dataclass(frozen=True)
class AugmentedPlant:
    """Position-free channel dynamics with velocity-error integrators
    appended: state [core states, integrators]."""

    channel: str
    a_aug: np.ndarray
    b_aug: np.ndarray
    e_aug: np.ndarray
    core: tuple[int, ...]
    n_outputs: int


def _pbh_uncontrollable(A: np.ndarray, B: np.ndarray) -> complex | None:
    n = A.shape[0]
    for lam in np.linalg.eigvals(A):
        if lam.real >= -1e-9:
            pencil = np.hstack([A - lam * np.eye(n), B])
            if np.linalg.matrix_rank(pencil, tol=1e-7) < n:
                return lam
    return None


def augment(plant: PlantModel, channel: str) -> AugmentedPlant:
    """Append velocity-error integrators to a channel's position-free core.

    The integrator rows are the believed-offset velocity output restricted to
    the core states; the reference enters through ``e_aug``.
    """
    if channel == "lon":
        a_full, b_full, c_full, core = plant.a_lon, plant.b_lon, plant.c_lon(), LON_CORE
    elif channel == "lat":
        a_full, b_full, c_full, core = plant.a_lat, plant.b_lat, plant.c_lat(), LAT_CORE
    else:
        raise ValueError(f"unknown channel {channel!r}")
    dropped = [i for i in range(6) if i not in core]
    if np.any(a_full[np.ix_(core, dropped)] != 0.0):
        raise SynthesisError(
            f"{channel} position states feed back into the core dynamics; "
            "the position-free reduction does not apply to this plant"
        )
    a_core = a_full[np.ix_(core, core)]
    b_core = b_full[list(core), :]
    c_core = c_full[:, list(core)]
    n, m_out = a_core.shape[0], c_core.shape[0]
    a_aug = np.block([[a_core, np.zeros((n, m_out))], [c_core, np.zeros((m_out, m_out))]])
    b_aug = np.vstack([b_core, np.zeros((m_out, 2))])
    e_aug = np.vstack([np.zeros((n, m_out)), -np.eye(m_out)])
    bad = _pbh_uncontrollable(a_aug, b_aug)
    if bad is not None:
        raise SynthesisError(
            f"{channel} augmented pair is not stabilizable: uncontrollable "
            f"eigenvalue {bad:.4g} (zero modes here mean the integrators are "
            "disconnected from the inputs)"
        )
    return AugmentedPlant(channel, a_aug, b_aug, e_aug, tuple(core), m_out)


def _stabilizing_initial_gain(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Initial stabilizing gain for the Newton iteration.

    Zero works when A is already Hurwitz; otherwise use the Bass shift: with
    beta above the largest real part, X solving (A+beta I)X + X(A+beta I)^T =
    2BB^T yields the stabilizing K = B^T X^{-1}.
    """
    eigs = np.linalg.eigvals(A)
    if eigs.real.max() < -1e-9:
        return np.zeros((B.shape[1], A.shape[0]))
    # The shift must dominate every eigenvalue so A + beta I is antistable
    # and the Gramian-like X below is positive semidefinite.
    beta = float(np.linalg.norm(A, "fro")) + 0.5
    shifted = A + beta * np.eye(A.shape[0])
    try:
        X = scipy.linalg.solve_continuous_lyapunov(shifted, 2.0 * B @ B.T)
        K = np.linalg.solve(X.T, B).T
    except np.linalg.LinAlgError as exc:
        raise CareSolverError(f"failed to build a stabilizing initial gain: {exc}")
    if np.linalg.eigvals(A - B @ K).real.max() >= 0.0:
        raise CareSolverError("Bass initialization did not stabilize the pair")
    return K


def care_residual(A, B, Q, R, P) -> float:
    closed = A.T @ P + P @ A - P @ B @ np.linalg.solve(R, B.T @ P) + Q
    return float(np.linalg.norm(closed, "fro"))


def solve_care(A, B, Q, R, max_iterations: int = 100) -> np.ndarray:
    """Stabilizing solution of A'P + PA - PBR^{-1}B'P + Q = 0 by
    Newton-Kleinman iteration (each step is one Lyapunov solve)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.asarray(B, dtype=float).reshape(A.shape[0], -1)
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if np.linalg.eigvalsh(R).min() <= 0.0:
        raise ValueError("R must be positive definite")
    K = _stabilizing_initial_gain(A, B)
    tol_scale = 1e-8
    residual = np.inf
    for _ in range(max_iterations):
        closed = A - B @ K
        rhs = -(Q + K.T @ R @ K)
        P = scipy.linalg.solve_continuous_lyapunov(closed.T, rhs)
        P = 0.5 * (P + P.T)
        residual = care_residual(A, B, Q, R, P)
        if residual < tol_scale * (1.0 + np.linalg.norm(P, "fro")):
            if np.linalg.eigvalsh(P).min() < -1e-8 * (1.0 + np.linalg.norm(P, "fro")):
                raise CareSolverError("Riccati iteration converged to an indefinite matrix")
            return P
        K = np.linalg.solve(R, B.T @ P)
    raise CareSolverError(
        f"Riccati iteration did not converge in {max_iterations} steps; "
        f"last residual {residual:.3e}"
    )


@dataclass(frozen=True)
class GainSet:
    """Synthesized feedback gains, re-embedded onto the full channel states
    (position columns are zero), plus design diagnostics."""

    k_state_lon: np.ndarray
    k_integ_lon: np.ndarray
    k_state_lat: np.ndarray
    k_integ_lat: np.ndarray
    lon_eigenvalues: np.ndarray
    lat_eigenvalues: np.ndarray
    lon_residual: float
    lat_residual: float


def _synthesize_channel(aug: AugmentedPlant, Q: np.ndarray, R: np.ndarray):
    P = solve_care(aug.a_aug, aug.b_aug, Q, R)
    K = np.linalg.solve(R, aug.b_aug.T @ P)
    residual = care_residual(aug.a_aug, aug.b_aug, Q, R, P)
    eigs = np.linalg.eigvals(aug.a_aug - aug.b_aug @ K)
    if eigs.real.max() >= 0.0:
        offenders = ", ".join(f"{e:.4g}" for e in eigs[eigs.real >= 0.0])
        raise SynthesisError(
            f"{aug.channel} closed loop is not Hurwitz; offending eigenvalues: {offenders}"
        )
    n_core = len(aug.core)
    k_state = np.zeros((2, 6))
    k_state[:, list(aug.core)] = K[:, :n_core]
    k_integ = K[:, n_core:]
    return k_state, k_integ, np.sort_complex(eigs), residual


def synthesize_gains(plant: PlantModel, weights: LqrWeights) -> GainSet:
    """LQR gains for both channels; raises if either loop fails the
    residual or Hurwitz requirement."""
    lon = augment(plant, "lon")
    lat = augment(plant, "lat")
    k_state_lon, k_integ_lon, lon_eigs, lon_res = _synthesize_channel(
        lon, weights.design_q("lon"), weights.r_lon
    )
    k_state_lat, k_integ_lat, lat_eigs, lat_res = _synthesize_channel(
        lat, weights.design_q("lat"), weights.r_lat
    )
    return GainSet(
        k_state_lon=k_state_lon,
        k_integ_lon=k_integ_lon,
        k_state_lat=k_state_lat,
        k_integ_lat=k_integ_lat,
        lon_eigenvalues=lon_eigs,
        lat_eigenvalues=lat_eigs,
        lon_residual=lon_res,
        lat_residual=lat_res,
    )


def format_synthesis_report(gains: GainSet) -> str:
    """Readable synthesis summary: gain blocks, closed-loop spectra, residuals."""
    lines = []
    with np.printoptions(precision=5, suppress=True):
        lines.append("longitudinal state gain (elevator, throttle rows):")
        lines.append(str(gains.k_state_lon))
        lines.append("longitudinal integrator gain:")
        lines.append(str(gains.k_integ_lon))
        lines.append(f"longitudinal Riccati residual: {gains.lon_residual:.3e}")
        lines.append("longitudinal closed-loop eigenvalues:")
        lines.append("  " + ", ".join(f"{e:.4f}" for e in gains.lon_eigenvalues))
        lines.append("lateral state gain (aileron, rudder rows):")
        lines.append(str(gains.k_state_lat))
        lines.append("lateral integrator gain:")
        lines.append(str(gains.k_integ_lat))
        lines.append(f"lateral Riccati residual: {gains.lat_residual:.3e}")
        lines.append("lateral closed-loop eigenvalues:")
        lines.append("  " + ", ".join(f"{e:.4f}" for e in gains.lat_eigenvalues))
    return "\n".join(lines)


@dataclass
class IntegratorState:
    """Integrated velocity tracking errors (measured minus desired)."""

    q_lon: np.ndarray = field(default_factory=lambda: np.zeros(2))
    q_lat: float = 0.0

    def copy(self) -> "IntegratorState":
        return IntegratorState(self.q_lon.copy(), self.q_lat)


def update_integrator(
    state: IntegratorState,
    measured: tuple[np.ndarray, float],
    desired: tuple[np.ndarray, float],
    dt: float,
    saturated: bool,
) -> IntegratorState:
    """Accumulate tracking error; frozen whenever any actuator is clipped so
    the integrators cannot wind up against the saturation."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if saturated:
        return state.copy()
    measured_lon, measured_lat = measured
    desired_lon, desired_lat = desired
    return IntegratorState(
        q_lon=state.q_lon + (np.asarray(measured_lon, dtype=float) - desired_lon) * dt,
        q_lat=state.q_lat + (float(measured_lat) - float(desired_lat)) * dt,
    )


def inner_control(state: ReceiverState, integ: IntegratorState, gains: GainSet) -> ControlInput:
    """Raw (pre-saturation) state plus integral feedback; the caller clamps
    it against the actuator limits and reports the clip back into the
    integrator update."""
    u_lon = -(gains.k_state_lon @ state.lon + gains.k_integ_lon @ integ.q_lon)
    u_lat = -(gains.k_state_lat @ state.lat + gains.k_integ_lat @ np.array([integ.q_lat]))
    return ControlInput(
        elevator=float(u_lon[0]),
        throttle=float(u_lon[1]),
        aileron=float(u_lat[0]),
        rudder=float(u_lat[1]),
    )
