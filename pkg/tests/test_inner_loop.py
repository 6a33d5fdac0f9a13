import numpy as np
import pytest

from probedock.dynamics import ControlInput, ReceiverState
from probedock.errors import CareSolverError, SynthesisError
from probedock.inner_loop import (
    AugmentedPlant,
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


def hamiltonian_care_solution(A, B, Q, R):
    """Independent oracle: stable invariant subspace of the Hamiltonian."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.asarray(B, dtype=float).reshape(A.shape[0], -1)
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    n = A.shape[0]
    H = np.block([[A, -B @ np.linalg.solve(R, B.T)], [-Q, -A.T]])
    eigvals, eigvecs = np.linalg.eig(H)
    stable = eigvecs[:, eigvals.real < 0.0]
    X, Y = stable[:n, :], stable[n:, :]
    P = Y @ np.linalg.inv(X)
    return np.real(0.5 * (P + P.conj().T))


# -- solve_care ---------------------------------------------------------------


def test_scalar_marginal_plant():
    P = solve_care(0.0, 1.0, 1.0, 1.0)
    assert P[0, 0] == pytest.approx(1.0, abs=1e-10)


def test_scalar_stable_plant_closed_form():
    P = solve_care(-1.0, 1.0, 1.0, 1.0)
    assert P[0, 0] == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-10)


def test_double_integrator_full_weighting():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B = np.array([[0.0], [1.0]])
    P = solve_care(A, B, np.eye(2), 1.0)
    K = (B.T @ P).ravel()
    assert np.allclose(K, [1.0, np.sqrt(3.0)], atol=1e-8)


def test_double_integrator_position_weighting():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B = np.array([[0.0], [1.0]])
    P = solve_care(A, B, np.diag([1.0, 0.0]), 1.0)
    K = (B.T @ P).ravel()
    assert np.allclose(K, [1.0, np.sqrt(2.0)], atol=1e-8)


def test_indefinite_r_is_a_domain_error():
    with pytest.raises(ValueError, match="positive definite"):
        solve_care(0.0, 1.0, 1.0, -1.0)


def test_matches_hamiltonian_oracle_on_random_plants():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, 2))
        C = rng.normal(size=(n, n)) + 0.5 * np.eye(n)
        Q = C.T @ C
        R = np.eye(2) + 0.1 * np.diag(rng.uniform(0.0, 1.0, size=2))
        P = solve_care(A, B, Q, R)
        P_oracle = hamiltonian_care_solution(A, B, Q, R)
        scale = 1.0 + np.linalg.norm(P_oracle, "fro")
        assert np.linalg.norm(P - P_oracle, "fro") < 1e-6 * scale
        assert care_residual(A, B, Q, R, P) < 1e-8 * (1.0 + np.linalg.norm(P, "fro"))


def test_solution_is_symmetric_psd():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(4, 4))
    B = rng.normal(size=(4, 1))
    Q = np.eye(4)
    P = solve_care(A, B, Q, 1.0)
    assert np.linalg.norm(P - P.T, "fro") < 1e-10 * np.linalg.norm(P, "fro")
    assert np.linalg.eigvalsh(P).min() > -1e-10


# -- weights ------------------------------------------------------------------


def test_default_weights_are_valid():
    w = LqrWeights()
    assert w.q_lon.shape == (8, 8)
    assert w.q_lat.shape == (7, 7)
    assert w.design_q("lon").shape == (6, 6)
    assert w.design_q("lat").shape == (6, 6)
    # Integrator weights stay in the bottom-right corner after reduction.
    assert w.design_q("lon")[4, 4] == 10.0
    assert w.design_q("lat")[5, 5] == 10.0


def test_weights_accept_diagonal_lists():
    w = LqrWeights(q_lon=[0, 0, 2, 1, 1, 1, 5, 5], r_lat=[2.0, 2.0])
    assert w.q_lon[2, 2] == 2.0
    assert w.r_lat[0, 0] == 2.0


def test_position_weight_is_rejected():
    q = np.diag([1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 10.0, 10.0])
    with pytest.raises(ValueError, match="position state"):
        LqrWeights(q_lon=q)


def test_weight_definiteness_checks():
    with pytest.raises(ValueError, match="positive definite"):
        LqrWeights(r_lon=np.zeros((2, 2)))
    q = np.diag([0.0, 0.0, -1.0, 1.0, 1.0, 1.0, 10.0, 10.0])
    with pytest.raises(ValueError, match="positive semidefinite"):
        LqrWeights(q_lon=q)


# -- augmentation -------------------------------------------------------------


def test_augmented_blocks_lon(plant):
    aug = augment(plant, "lon")
    assert aug.a_aug.shape == (6, 6)
    assert np.all(aug.a_aug[:4, 4:] == 0.0)
    assert np.allclose(aug.a_aug[4:, :4], plant.c_lon()[:, list(aug.core)])
    assert np.all(aug.b_aug[4:] == 0.0)
    assert np.allclose(aug.e_aug[4:], -np.eye(2))


def test_augmented_blocks_lat(plant):
    aug = augment(plant, "lat")
    assert aug.a_aug.shape == (6, 6)
    assert aug.n_outputs == 1
    assert np.allclose(aug.a_aug[5, :5], plant.c_lat()[:, list(aug.core)])


def test_zero_output_rows_are_rejected(plant):
    class MutedPlant(type(plant)):
        def c_lon(self, offset=None):
            return np.zeros((2, 6))

    muted = MutedPlant(
        a_lon=plant.a_lon,
        b_lon=plant.b_lon,
        a_lat=plant.a_lat,
        b_lat=plant.b_lat,
        trim_airspeed=plant.trim_airspeed,
        mount_offset=plant.mount_offset,
        limits=plant.limits,
    )
    with pytest.raises(SynthesisError, match="not stabilizable"):
        augment(muted, "lon")


def test_position_coupled_core_is_rejected(plant):
    from probedock.dynamics import PlantModel

    a_lon = plant.a_lon.copy()
    a_lon[3, 0] = 0.001  # airspeed dynamics must not depend on along-track position
    coupled = PlantModel(
        a_lon=a_lon,
        b_lon=plant.b_lon,
        a_lat=plant.a_lat,
        b_lat=plant.b_lat,
        trim_airspeed=plant.trim_airspeed,
        mount_offset=plant.mount_offset,
        limits=plant.limits,
    )
    with pytest.raises(SynthesisError, match="position states feed back"):
        augment(coupled, "lon")


# -- synthesis ----------------------------------------------------------------


def test_default_synthesis_is_hurwitz_with_tight_residuals(plant):
    gains = synthesize_gains(plant, LqrWeights())
    assert gains.lon_eigenvalues.real.max() < 0.0
    assert gains.lat_eigenvalues.real.max() < 0.0
    assert gains.k_state_lon.shape == (2, 6)
    assert gains.k_state_lat.shape == (2, 6)
    assert gains.k_integ_lon.shape == (2, 2)
    assert gains.k_integ_lat.shape == (2, 1)
    # Position columns were never part of the design system.
    assert np.all(gains.k_state_lon[:, :2] == 0.0)
    assert np.all(gains.k_state_lat[:, :1] == 0.0)


def test_residual_bound_on_both_channels(plant):
    w = LqrWeights()
    for channel, r in (("lon", w.r_lon), ("lat", w.r_lat)):
        aug = augment(plant, channel)
        Q = w.design_q(channel)
        P = solve_care(aug.a_aug, aug.b_aug, Q, r)
        assert care_residual(aug.a_aug, aug.b_aug, Q, r, P) < 1e-8 * (
            1.0 + np.linalg.norm(P, "fro")
        )


def test_joint_scaling_leaves_gains_unchanged(plant):
    base = synthesize_gains(plant, LqrWeights())
    alpha = 7.3
    w = LqrWeights()
    scaled = synthesize_gains(
        plant,
        LqrWeights(
            q_lon=alpha * w.q_lon,
            r_lon=alpha * w.r_lon,
            q_lat=alpha * w.q_lat,
            r_lat=alpha * w.r_lat,
        ),
    )
    assert np.allclose(scaled.k_state_lon, base.k_state_lon, atol=1e-8)
    assert np.allclose(scaled.k_integ_lon, base.k_integ_lon, atol=1e-8)
    assert np.allclose(scaled.k_state_lat, base.k_state_lat, atol=1e-8)
    assert np.allclose(scaled.k_integ_lat, base.k_integ_lat, atol=1e-8)


def test_costlier_inputs_shrink_gains(plant):
    w = LqrWeights()
    base = synthesize_gains(plant, w)
    pricey = synthesize_gains(
        plant, LqrWeights(r_lon=10.0 * w.r_lon, r_lat=10.0 * w.r_lat)
    )

    def total_norm(g):
        return sum(
            np.linalg.norm(block)
            for block in (g.k_state_lon, g.k_integ_lon, g.k_state_lat, g.k_integ_lat)
        )

    assert total_norm(pricey) <= total_norm(base) + 1e-9


def test_report_mentions_eigenvalues_and_residuals(plant):
    gains = synthesize_gains(plant, LqrWeights())
    report = format_synthesis_report(gains)
    assert "closed-loop eigenvalues" in report
    assert "Riccati residual" in report
    assert "aileron" in report


# -- integrator and control law -----------------------------------------------


def test_integrator_rest_when_tracking():
    state = IntegratorState()
    out = update_integrator(
        state, (np.array([0.3, -0.2]), 0.1), (np.array([0.3, -0.2]), 0.1), 0.01, False
    )
    assert np.all(out.q_lon == 0.0)
    assert out.q_lat == 0.0


def test_integrator_accumulates_constant_error():
    state = IntegratorState()
    for _ in range(100):
        state = update_integrator(
            state, (np.array([1.0, 0.0]), 0.0), (np.zeros(2), 0.0), 0.01, False
        )
    assert abs(state.q_lon[0] - 1.0) < 1e-12
    assert state.q_lon[1] == 0.0


def test_integrator_freezes_while_saturated():
    state = IntegratorState(q_lon=np.array([0.5, 0.5]), q_lat=-0.25)
    out = update_integrator(
        state, (np.array([9.0, 9.0]), 9.0), (np.zeros(2), 0.0), 0.01, True
    )
    assert np.all(out.q_lon == state.q_lon)
    assert out.q_lat == state.q_lat


def test_integrator_requires_positive_dt():
    with pytest.raises(ValueError):
        update_integrator(IntegratorState(), (np.zeros(2), 0.0), (np.zeros(2), 0.0), 0.0, False)


def make_gain_set():
    rng = np.random.default_rng(17)
    return GainSet(
        k_state_lon=rng.normal(size=(2, 6)),
        k_integ_lon=rng.normal(size=(2, 2)),
        k_state_lat=rng.normal(size=(2, 6)),
        k_integ_lat=rng.normal(size=(2, 1)),
        lon_eigenvalues=np.array([-1.0 + 0j]),
        lat_eigenvalues=np.array([-1.0 + 0j]),
        lon_residual=0.0,
        lat_residual=0.0,
    )


def test_inner_control_zero_state_zero_command():
    u = inner_control(ReceiverState(), IntegratorState(), make_gain_set())
    assert u == ControlInput(0.0, 0.0, 0.0, 0.0)


def test_inner_control_is_linear_pre_saturation():
    gains = make_gain_set()
    rng = np.random.default_rng(23)
    xa = ReceiverState(rng.normal(size=6), rng.normal(size=6))
    xb = ReceiverState(rng.normal(size=6), rng.normal(size=6))
    qa = IntegratorState(rng.normal(size=2), rng.normal())
    qb = IntegratorState(rng.normal(size=2), rng.normal())
    u_sum = inner_control(
        ReceiverState(xa.lon + xb.lon, xa.lat + xb.lat),
        IntegratorState(qa.q_lon + qb.q_lon, qa.q_lat + qb.q_lat),
        gains,
    )
    ua = inner_control(xa, qa, gains)
    ub = inner_control(xb, qb, gains)
    assert np.allclose(u_sum.as_array(), ua.as_array() + ub.as_array())


def test_inner_control_reproduces_gain_columns():
    gains = make_gain_set()
    for i in range(6):
        lon = np.zeros(6)
        lon[i] = 1.0
        u = inner_control(ReceiverState(lon, np.zeros(6)), IntegratorState(), gains)
        assert np.allclose(u.lon(), -gains.k_state_lon[:, i])
        assert np.allclose(u.lat(), 0.0)


def test_synthesis_report_roundtrip_smoke(plant):
    # The report should be printable for any synthesizable weight choice.
    report = format_synthesis_report(synthesize_gains(plant, LqrWeights(r_lon=[4.0, 4.0])))
    assert isinstance(report, str) and len(report) > 0
