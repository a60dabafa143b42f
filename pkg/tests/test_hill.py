import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from floqtools import (
    DriveProfile,
    NoRootError,
    classical_trajectory,
    constant_family,
    find_loop_beta,
    floquet_result,
    loop_deviation,
    monodromy,
    omega_F_scan,
    oscillator_quasienergies,
    rectangular_family,
    sinusoid_family,
)
from floqtools._linops import rotation2

TWO_PI = 2.0 * math.pi


def rotation_block(beta, t):
    return np.array([
        [math.cos(beta * t), math.sin(beta * t) / beta],
        [-beta * math.sin(beta * t), math.cos(beta * t)],
    ])


# ---------- monodromy ----------


def test_constant_profile_matches_analytic_rotation():
    beta0, period = 1.3, 1.0
    m = monodromy(DriveProfile.constant(beta0, period))
    assert np.abs(m - rotation_block(beta0, period)).max() < 1e-9


def test_free_profile_is_a_shear():
    m = monodromy(DriveProfile.constant(0.0, 2.0))
    assert_allclose(m, [[1.0, 2.0], [0.0, 1.0]], atol=1e-14)


def test_rectangular_profile_closed_form_trace():
    beta0, period = 2.3, 1.0
    profile = DriveProfile.from_steps(((beta0, period / 2), (0.0, period / 2)))
    x = beta0 * period / 2
    expected = 2.0 * math.cos(x) - x * math.sin(x)
    assert np.trace(monodromy(profile)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("profile", [
    DriveProfile.constant(1.7, 1.0),
    DriveProfile.from_steps(((2.0, 0.3), (0.7, 0.7))),
    DriveProfile.sinusoid(2.2, TWO_PI),
    DriveProfile.offset_sinusoid(0.8, 0.9, TWO_PI),
])
def test_monodromy_has_unit_determinant(profile):
    assert abs(np.linalg.det(monodromy(profile)) - 1.0) < 1e-10


def test_sinusoid_against_many_constant_steps():
    # Sampling the sinusoid with 1e4 constant steps must agree with the
    # integrated monodromy.
    beta0 = 2.0
    profile = DriveProfile.sinusoid(beta0, TWO_PI)
    n = 10_000
    dt = profile.period / n
    mids = (np.arange(n) + 0.5) * dt
    stepped = DriveProfile.from_steps(
        tuple((beta0 * math.sin(TWO_PI * t), dt) for t in mids))
    assert np.abs(monodromy(stepped) - monodromy(profile)).max() < 1e-5


def test_time_rescaling_leaves_trace_invariant():
    scale = 2.7
    pairs = [
        (DriveProfile.constant(1.3, 1.0), DriveProfile.constant(1.3 / scale, scale)),
        (DriveProfile.from_steps(((1.7, 0.5), (0.0, 0.5))),
         DriveProfile.from_steps(((1.7 / scale, 0.5 * scale), (0.0, 0.5 * scale)))),
    ]
    for original, rescaled in pairs:
        assert np.trace(monodromy(original)) == pytest.approx(
            np.trace(monodromy(rescaled)), abs=1e-12)


# ---------- stability classification ----------


def test_quarter_turn_rotation_result():
    res = floquet_result(rotation2(math.pi / 2), 1.0)
    assert res.stability == "elliptic"
    assert res.omega_F == pytest.approx(math.pi / 2)
    assert res.loop_order == 4


def test_identity_is_parabolic_with_trivial_loop():
    res = floquet_result(np.eye(2), 1.0)
    assert res.stability == "parabolic"
    assert res.omega_F == 0.0
    assert res.loop_order == 1


def test_hyperbolic_matrix_has_no_frequency_or_loop():
    res = floquet_result(np.diag([2.0, 0.5]), 1.0)
    assert res.stability == "hyperbolic"
    assert res.omega_F is None
    assert res.loop_order is None


def test_reported_loops_are_sound():
    rng = np.random.default_rng(5)
    for angle_num in (1, 2, 3, 5):
        angle = TWO_PI * angle_num / 8
        conj = np.array([[1.0, rng.normal()], [0.0, 1.0]])
        m = conj @ rotation2(angle) @ np.linalg.inv(conj)
        res = floquet_result(m, 1.0)
        assert res.loop_order is not None
        assert loop_deviation(m, res.loop_order) < 1e-8
        ratio = res.omega_F * res.loop_order / TWO_PI
        assert abs(ratio - round(ratio)) < 1e-7


# ---------- loop search ----------


def test_constant_loop_amplitude_is_quarter_angle():
    beta0 = find_loop_beta(constant_family(), math.pi / 2, (1.0, 2.0))
    assert beta0 == pytest.approx(math.pi / 2, abs=1e-7)


def test_rectangular_loop_matches_transcendental_oracle():
    from scipy.optimize import bisect
    beta0 = find_loop_beta(rectangular_family(), math.pi / 2, (1.5, 3.0))
    # Independent closed form: trace = 2 cos(x) - x sin(x) with x = beta0/2,
    # so the quarter-angle loop solves tan(x) = 2/x.
    oracle = 2.0 * bisect(lambda x: x * math.sin(x) - 2.0 * math.cos(x),
                          0.5, 1.5, xtol=1e-12)
    assert abs(beta0 - oracle) < 1e-6


def test_find_loop_beta_reports_missing_root():
    with pytest.raises(NoRootError):
        find_loop_beta(constant_family(), math.pi / 2, (2.0, 2.5))


# ---------- scans and ladders ----------


def test_scan_of_constant_family():
    rows = omega_F_scan(constant_family(), [0.5, 1.0])
    assert [row.omega_F for row in rows] == pytest.approx([0.5, 1.0])
    assert all(row.stability == "elliptic" for row in rows)


def test_scan_rectangular_near_loop_amplitude():
    row = omega_F_scan(rectangular_family(), [2.15375])[0]
    assert abs(row.trace) < 1e-3


def test_scan_sinusoid_near_loop_amplitude():
    row = omega_F_scan(sinusoid_family(), [2.21231], n_steps=4096)[0]
    assert abs(row.omega_F - math.pi / 2) < 1e-3


def test_scan_marks_unstable_points():
    row = omega_F_scan(sinusoid_family(), [7.5], n_steps=2048)[0]
    assert row.stability == "hyperbolic"
    assert row.omega_F is None


def test_oscillator_quasienergy_ladder():
    assert_allclose(oscillator_quasienergies(0.0, TWO_PI, 4), np.zeros(4))
    assert_allclose(oscillator_quasienergies(math.pi / 2, TWO_PI, 2),
                    [math.pi / 4, 3 * math.pi / 4])
    ladder = oscillator_quasienergies(math.pi / 2, TWO_PI, 5)
    assert ladder[4] == pytest.approx(math.pi / 4)  # 9 pi / 4 folded back


# ---------- trajectories ----------


def test_constant_drive_orbit_closes():
    path = classical_trajectory(DriveProfile.constant(math.pi / 2), (1.0, 0.0),
                                4.0, n_steps=512)
    assert np.abs(path[-1, 1:] - [1.0, 0.0]).max() < 1e-6


def test_free_motion_trajectory():
    path = classical_trajectory(DriveProfile.constant(0.0), (0.0, 1.0), 2.0,
                                n_steps=16)
    assert_allclose(path[-1], [2.0, 2.0, 1.0], atol=1e-12)


def test_rectangular_loop_trajectory_closes():
    profile = DriveProfile.from_steps(((2.15375, 0.5), (0.0, 0.5)))
    path = classical_trajectory(profile, (1.0, 0.0), 4.0, n_steps=512)
    assert np.abs(path[-1, 1:] - path[0, 1:]).max() < 1e-3
