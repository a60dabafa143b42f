"""Planar dynamics of a charged particle in a time-dependent axial magnetic field.

In scaled variables the in-plane motion is generated by
H(t) = (p1^2 + p2^2)/2 + beta(t)^2 (q1^2 + q2^2)/2 - beta(t) (q1 p2 - q2 p1),
with the drive beta(t) = e B(t) / (2 m c). The free axial motion decouples
and is not simulated. Passing to the frame rotating by the accumulated angle
integral of beta removes the angular-momentum term and leaves two identical
radial Hill equations u'' + beta(t)^2 u = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import hill
from ._linops import chain_matmul, oscillator_blocks, rotation2
from .profiles import DriveProfile, beta_period_integral, integration_segments
from .propagator import TWO_PI, default_steps

# Symplectic form on (q1, q2, p1, p2).
SYMPLECTIC_FORM_4 = np.block([
    [np.zeros((2, 2)), np.eye(2)],
    [-np.eye(2), np.zeros((2, 2))],
])


@dataclass(frozen=True)
class PhysicalParams:
    """Charge, mass, light speed, and field amplitude in Gaussian units."""

    charge: float
    mass: float
    light_speed: float
    field: float

    def __post_init__(self):
        for name in ("charge", "mass", "light_speed"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.field < 0:
            raise ValueError("field must be non-negative")


def beta_from_physical(params):
    """Drive amplitude beta = e B / (2 m c), in inverse-time units."""
    return params.charge * params.field / (2.0 * params.mass * params.light_speed)


def symplectic_defect(m):
    """Max-norm of M^T J M - J on the 4d phase space."""
    m = np.asarray(m, dtype=float)
    return float(np.abs(m.T @ SYMPLECTIC_FORM_4 @ m - SYMPLECTIC_FORM_4).max())


def _planar_blocks(betas, dts):
    # Frozen-beta step: the angular-momentum rotation commutes with the
    # isotropic radial oscillator, so the exact exponential factorizes into
    # kron(radial block, in-plane rotation) on (q1, q2, p1, p2).
    osc = oscillator_blocks(betas, dts)
    phi = np.asarray(betas, dtype=float) * np.asarray(dts, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    rot = np.empty(phi.shape + (2, 2))
    rot[..., 0, 0] = c
    rot[..., 0, 1] = s
    rot[..., 1, 0] = -s
    rot[..., 1, 1] = c
    n = osc.shape[0]
    return np.einsum("nab,ncd->nacbd", osc, rot).reshape(n, 4, 4)


def planar_monodromy(profile, n_periods=1, n_steps=None):
    """Flow map of (q1, q2, p1, p2) over n_periods drive periods."""
    if n_steps is None:
        n_steps = default_steps()
    n_periods = int(n_periods)
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    dts, betas = integration_segments(profile, 0.0, profile.period, n_steps)
    one_period = chain_matmul(_planar_blocks(betas, dts))
    return np.linalg.matrix_power(one_period, n_periods)


def rotating_frame_reduction(profile, n_periods=1, n_steps=None):
    """Accumulated rotation angle and radial monodromy over n_periods.

    Returns (theta, M_radial) with theta the integral of beta over the span
    (closed form) and M_radial the radial Hill monodromy. The planar flow is
    recovered by reconstruct_planar(theta, M_radial).
    """
    n_periods = int(n_periods)
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    theta = n_periods * beta_period_integral(profile)
    m_radial = np.linalg.matrix_power(hill.monodromy(profile, n_steps), n_periods)
    return theta, m_radial


def reconstruct_planar(theta, m_radial):
    """Rotation by theta acting jointly on (q1, q2) and (p1, p2), composed
    with the radial map applied identically in both rotated planes.

    Positive theta rotates with the [[cos, sin], [-sin, cos]] convention,
    matching the sense of the constant-drive analytic solution.
    """
    return np.kron(np.eye(2), rotation2(theta)) @ np.kron(np.asarray(m_radial, float), np.eye(2))


def planar_loop_check(profile, n_periods, tol=1e-2, n_steps=None):
    """(is_loop, deviation): deviation = ||M(nT) - 1||_max against tol."""
    m = planar_monodromy(profile, n_periods, n_steps)
    deviation = float(np.abs(m - np.eye(4)).max())
    return deviation < tol, deviation


def stability_threshold(omega, alpha_bracket=(0.3, 0.8), n_steps=None, xtol=1e-6):
    """First amplitude ratio alpha at which the sinusoidally driven radial
    motion turns unstable.

    alpha parametrizes the drive as beta(t) = 2 alpha omega sin(omega t);
    the threshold of the rescaled radial Hill equation is a pure number, so
    the result does not depend on omega. Bisection runs on tr M - 2, which
    changes sign exactly at the first stability boundary (the full-period
    trace of this family never drops below -2, being the square of the
    half-period map).

    Raises NoRootError when the bracket holds no crossing.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    lo, hi = float(alpha_bracket[0]), float(alpha_bracket[1])

    def objective(alpha):
        profile = DriveProfile.sinusoid(2.0 * alpha * omega, omega)
        return float(np.trace(hill.monodromy(profile, n_steps))) - 2.0

    try:
        root = bisect(objective, lo, hi, xtol=xtol)
    except ValueError as exc:
        raise hill.NoRootError(
            f"no stability boundary inside bracket ({lo:g}, {hi:g})") from exc
    return float(root)


def polish_loop_beta1(beta0, beta1, omega, n_periods, n_steps=None, rel_bracket=0.05):
    """Refine the sine amplitude of an offset-sinusoid drive onto an exact loop.

    Holding beta0 fixed, the radial Floquet angle is pushed onto the nearest
    multiple of 2 pi / n_periods (the loop condition for the radial factor).
    Returns the refined beta1.
    """
    def profile(b1):
        return DriveProfile.offset_sinusoid(beta0, b1, omega)

    def angle(b1):
        tr = float(np.trace(hill.monodromy(profile(b1), n_steps)))
        return math.acos(min(1.0, max(-1.0, 0.5 * tr)))

    target = round(angle(beta1) * n_periods / TWO_PI) * TWO_PI / n_periods
    goal = 2.0 * math.cos(target)

    def objective(b1):
        return float(np.trace(hill.monodromy(profile(b1), n_steps))) - goal

    lo = beta1 * (1.0 - rel_bracket)
    hi = beta1 * (1.0 + rel_bracket)
    try:
        root = bisect(objective, lo, hi, xtol=1e-10)
    except ValueError as exc:
        raise hill.NoRootError(
            f"no loop angle crossing inside bracket ({lo:g}, {hi:g})") from exc
    return float(root)


def planar_trajectory(profile, state0, t_end, n_steps=None):
    """Sampled in-plane path; rows are (t, q1, q2, p1, p2)."""
    if n_steps is None:
        n_steps = default_steps()
    n = int(n_steps)
    if n < 1:
        raise ValueError("n_steps must be >= 1")
    times = np.linspace(0.0, float(t_end), n + 1)
    out = np.empty((n + 1, 5))
    state = np.asarray(state0, dtype=float).copy()
    out[0, 0] = times[0]
    out[0, 1:] = state
    for k in range(n):
        dts, betas = integration_segments(profile, times[k], times[k + 1], 1)
        for block in _planar_blocks(betas, dts):
            state = block @ state
        out[k + 1, 0] = times[k + 1]
        out[k + 1, 1:] = state
    return out
