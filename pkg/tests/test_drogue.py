import numpy as np
import pytest

from probedock.drogue import BowWaveParams, DrogueModel, bow_wave_velocity, drogue_velocity


def make_model(**kwargs):
    defaults = dict(
        nominal_position=[22.0, 2.0, -0.5],
        gust_gain=0.15,
        bow_wave=BowWaveParams(),
        trim_airspeed=120.0,
    )
    defaults.update(kwargs)
    return DrogueModel(**defaults)


def test_bow_wave_params_validation():
    with pytest.raises(ValueError):
        BowWaveParams(activation_radius=0.0)
    with pytest.raises(ValueError):
        BowWaveParams(strength=-0.1)
    with pytest.raises(ValueError):
        BowWaveParams(decay_exponent=0.0)
    with pytest.raises(ValueError):
        DrogueModel(nominal_position=[1.0, 0.0, 0.0], gust_gain=-0.2)


def test_zero_outside_activation_radius():
    model = make_model()
    v = drogue_velocity(model, np.zeros(3), np.array([10.0, 0.0, 0.0]), np.zeros(3), 120.0)
    assert np.all(v == 0.0)


def test_full_strength_at_contact():
    model = make_model()
    v = bow_wave_velocity(model, np.zeros(3), np.zeros(3), 120.0)
    assert np.linalg.norm(v) == pytest.approx(model.bow_wave.strength)


def test_half_strength_at_half_radius():
    model = make_model()
    probe = np.zeros(3)
    drogue_pos = np.array([2.0, 0.0, 0.0])  # half of the 4 m activation radius
    v = bow_wave_velocity(model, probe, drogue_pos, 60.0)
    expected = model.bow_wave.strength * 0.5 * (60.0 / 120.0)
    assert np.linalg.norm(v) == pytest.approx(expected)


def test_direction_is_radially_away_from_probe():
    model = make_model()
    probe = np.array([1.0, -1.0, 0.5])
    drogue_pos = probe + np.array([2.0, 1.0, 0.0])
    v = bow_wave_velocity(model, probe, drogue_pos, 120.0)
    direction = (drogue_pos - probe) / np.linalg.norm(drogue_pos - probe)
    assert np.allclose(v / np.linalg.norm(v), direction)


def test_magnitude_continuous_at_activation_radius():
    model = make_model()
    probe = np.zeros(3)
    just_inside = np.array([4.0 - 1e-9, 0.0, 0.0])
    v = bow_wave_velocity(model, probe, just_inside, 120.0)
    assert np.linalg.norm(v) < 1e-8


def test_magnitude_monotone_in_separation():
    model = make_model()
    probe = np.zeros(3)
    mags = [
        np.linalg.norm(bow_wave_velocity(model, probe, np.array([d, 0.0, 0.0]), 120.0))
        for d in np.linspace(0.0, 5.0, 60)
    ]
    assert all(a >= b - 1e-12 for a, b in zip(mags, mags[1:]))


def test_disabled_bow_wave_contributes_nothing():
    model = make_model(bow_wave=None)
    v = bow_wave_velocity(model, np.zeros(3), np.array([0.5, 0.0, 0.0]), 120.0)
    assert np.all(v == 0.0)


def test_gust_coupling_is_scaled_and_rotated():
    model = make_model(bow_wave=None)
    gust = np.array([1.0, 2.0, 3.0])
    v = drogue_velocity(model, np.zeros(3), np.array([30.0, 0.0, 0.0]), gust, 120.0)
    # Tanker (x, y, z) maps to camera (right, down, forward) = (y, z, x).
    assert np.allclose(v, 0.15 * np.array([2.0, 3.0, 1.0]))


def test_combined_disturbance_adds_linearly():
    model = make_model()
    probe = np.zeros(3)
    drogue_pos = np.array([1.0, 0.5, 0.0])
    gust = np.array([0.4, -0.2, 0.1])
    total = drogue_velocity(model, probe, drogue_pos, gust, 120.0)
    gust_only = drogue_velocity(model, probe, drogue_pos + 100.0, gust, 120.0)
    bow_only = drogue_velocity(model, probe, drogue_pos, np.zeros(3), 120.0)
    assert np.allclose(total, gust_only + bow_only)
