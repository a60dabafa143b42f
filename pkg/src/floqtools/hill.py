"""Monodromy, Floquet frequency, and loop search for q'' + beta(t)^2 q = 0.

The classical one-period flow map (monodromy) fully determines the stability
class and the quasi-level spacing of the pulsed oscillator; an evolution
loop is a drive whose monodromy power returns to the identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.optimize import bisect

from ._linops import chain_matmul, oscillator_blocks
from .profiles import DriveProfile, integration_segments
from .propagator import TWO_PI, default_steps, reduce_to_zone

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"

_PARABOLIC_TOL = 1e-12
_LOOP_TOL = 1e-8


class NoRootError(RuntimeError):
    """A bisection bracket does not contain a sign change."""


@dataclass(frozen=True)
class FloquetResult:
    """Stability class, trace, Floquet frequency, and loop order of a monodromy."""

    stability: str
    trace: float
    omega_F: Optional[float]
    loop_order: Optional[int]


class SweepPoint(NamedTuple):
    beta0: float
    trace: float
    stability: str
    omega_F: Optional[float]


def monodromy(profile, n_steps=None):
    """One-period flow map of (q, p) for q'' + beta(t)^2 q = 0.

    Constant and steps profiles are composed from exact rotation/shear
    blocks (n_steps is ignored); sinusoidal profiles use n_steps
    midpoint-frozen blocks per period, each exactly area preserving.
    """
    if n_steps is None:
        n_steps = default_steps()
    dts, betas = integration_segments(profile, 0.0, profile.period, n_steps)
    return chain_matmul(oscillator_blocks(betas, dts))


def floquet_result(m, t_period, n_max=64):
    """Classify a monodromy matrix and search for its loop order.

    Elliptic for |tr| < 2, hyperbolic for |tr| > 2, parabolic on the
    boundary. The Floquet frequency solves cos(omega_F T) = tr/2 with
    omega_F T in [0, pi]; loop_order is the least n <= n_max with
    ||M^n - 1||_max below 1e-8, absent otherwise.
    """
    m = np.asarray(m, dtype=float)
    tr = float(np.trace(m))
    if abs(abs(tr) - 2.0) <= _PARABOLIC_TOL:
        stability = PARABOLIC
    elif abs(tr) < 2.0:
        stability = ELLIPTIC
    else:
        stability = HYPERBOLIC
    omega_f = None
    if stability != HYPERBOLIC:
        omega_f = math.acos(min(1.0, max(-1.0, 0.5 * tr))) / t_period
    loop_order = None
    if stability != HYPERBOLIC:
        eye = np.eye(2)
        power = eye
        for n in range(1, int(n_max) + 1):
            power = m @ power
            if float(np.abs(power - eye).max()) < _LOOP_TOL:
                loop_order = n
                break
    return FloquetResult(stability, tr, omega_f, loop_order)


def loop_deviation(m, n_periods):
    """||M^n - 1||_max, the closure defect after n periods."""
    power = np.linalg.matrix_power(np.asarray(m, dtype=float), int(n_periods))
    return float(np.abs(power - np.eye(m.shape[0])).max())


def find_loop_beta(family, target_angle, bracket, n_steps=None, xtol=1e-8):
    """Drive amplitude at which the Floquet angle omega_F T crosses target_angle.

    Parameters
    ----------
    family : callable
        Maps an amplitude beta0 to a DriveProfile.
    target_angle : float
        Desired one-period rotation angle, typically 2 pi k / n for a loop
        of order n.
    bracket : (float, float)
        Amplitude interval with a sign change of tr M - 2 cos(target_angle).

    Bisection runs on the trace rather than on the angle itself, so the
    bracket may graze instability without arccos domain failures.

    Raises NoRootError when the bracket holds no sign change.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    goal = 2.0 * math.cos(target_angle)

    def objective(beta0):
        return float(np.trace(monodromy(family(beta0), n_steps))) - goal

    try:
        root = bisect(objective, lo, hi, xtol=xtol)
    except ValueError as exc:
        raise NoRootError(
            f"no Floquet-angle crossing inside bracket ({lo:g}, {hi:g})") from exc
    return float(root)


def loop_order_for_angle(target_angle, n_max=512):
    """Smallest n with n * target_angle an integer multiple of 2 pi, if any."""
    for n in range(1, int(n_max) + 1):
        if abs(reduce_to_zone(n * target_angle, TWO_PI)) < 1e-9 * max(1.0, n):
            return n
    return None


def omega_F_scan(family, beta0_grid, n_steps=None):
    """Table of (beta0, trace, stability, omega_F) across an amplitude grid."""
    rows = []
    for beta0 in beta0_grid:
        profile = family(beta0)
        res = floquet_result(monodromy(profile, n_steps), profile.period, n_max=0)
        rows.append(SweepPoint(float(beta0), res.trace, res.stability, res.omega_F))
    return rows


def oscillator_quasienergies(omega_f, omega, n_levels):
    """Ladder omega_F (n + 1/2), each level reduced to (-omega/2, omega/2]."""
    if omega_f < 0:
        raise ValueError("omega_F must be non-negative")
    if not omega > 0:
        raise ValueError("omega must be positive")
    levels = omega_f * (np.arange(int(n_levels)) + 0.5)
    return reduce_to_zone(levels, omega)


def classical_trajectory(profile, state0, t_end, n_steps=None):
    """Phase-plane path of (q, p), sampled on a uniform grid.

    Returns an array with rows (t, q, p); steps profiles are integrated
    exactly by splitting sample intervals at the drive discontinuities.
    """
    if n_steps is None:
        n_steps = default_steps()
    n = int(n_steps)
    if n < 1:
        raise ValueError("n_steps must be >= 1")
    times = np.linspace(0.0, float(t_end), n + 1)
    out = np.empty((n + 1, 3))
    state = np.asarray(state0, dtype=float).copy()
    out[0] = (times[0], state[0], state[1])
    for k in range(n):
        dts, betas = integration_segments(profile, times[k], times[k + 1], 1)
        for block in oscillator_blocks(betas, dts):
            state = block @ state
        out[k + 1] = (times[k + 1], state[0], state[1])
    return out


def constant_family(period=1.0) -> Callable[[float], DriveProfile]:
    """Time-independent drives beta(t) = beta0."""
    return lambda beta0: DriveProfile.constant(beta0, period)


def rectangular_family(period=1.0, duty=0.5) -> Callable[[float], DriveProfile]:
    """Rectangular pulses: beta0 for duty*T, then 0 for the rest of the period."""
    return lambda beta0: DriveProfile.from_steps(
        ((beta0, duty * period), (0.0, (1.0 - duty) * period)))


def sinusoid_family(omega=TWO_PI) -> Callable[[float], DriveProfile]:
    """Sinusoidal drives beta(t) = beta0 sin(omega t)."""
    return lambda beta0: DriveProfile.sinusoid(beta0, omega)
