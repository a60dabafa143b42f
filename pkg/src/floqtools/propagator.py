"""Finite-dimensional propagators for time-periodic Hamiltonians.

Conventions used throughout the package: hbar = 1, a Hamiltonian H generates
U = exp(-i t H), and quasienergies live in the symmetric zone
(-omega/2, omega/2] with omega = 2 pi / T.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linops import chain_matmul

TWO_PI = 2.0 * math.pi

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_HERMITIAN_TOL = 1e-12
_UNITARY_TOL = 1e-10

# Two-point Gauss-Legendre nodes and the weights of the fourth-order
# commutator-free exponential scheme built on them.
_GAUSS_C1 = 0.5 - math.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + math.sqrt(3.0) / 6.0
_CF4_A1 = 0.25 + math.sqrt(3.0) / 6.0
_CF4_A2 = 0.25 - math.sqrt(3.0) / 6.0


def default_steps():
    """Integrator steps per period; env var FLOQUET_STEPS overrides 4096."""
    raw = os.environ.get("FLOQUET_STEPS")
    if raw is None:
        return 4096
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"FLOQUET_STEPS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("FLOQUET_STEPS must be >= 1")
    return value


def as_hermitian(h, tol=_HERMITIAN_TOL):
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    defect = float(np.abs(m - m.conj().T).max())
    if defect > tol * scale:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    return 0.5 * (m + m.conj().T)


def unitarity_defect(u):
    """Max-norm of U^dag U - 1."""
    m = np.asarray(u, dtype=complex)
    return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())


@dataclass(frozen=True, eq=False)
class Unitary:
    """A unitary propagator together with the time span (t_start, t_end) it covers."""

    matrix: np.ndarray
    span: tuple = (0.0, 0.0)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        defect = unitarity_defect(m)
        if defect > _UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "span", (float(self.span[0]), float(self.span[1])))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class StepPattern:
    """Piecewise-constant Hamiltonian: (H_i, tau_i) applied in listed order."""

    steps: tuple

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a step pattern needs at least one (H, tau) step")
        norm = []
        dim = None
        for i, (h, tau) in enumerate(self.steps):
            tau = float(tau)
            if not tau > 0:
                raise ValueError(f"step {i}: duration must be positive")
            hm = as_hermitian(h)
            if dim is None:
                dim = hm.shape[0]
            elif hm.shape[0] != dim:
                raise ValueError(f"step {i}: dimension {hm.shape[0]} does not match {dim}")
            norm.append((hm, tau))
        object.__setattr__(self, "steps", tuple(norm))

    @property
    def period(self):
        return sum(tau for _, tau in self.steps)

    @property
    def dim(self):
        return self.steps[0][0].shape[0]


@dataclass(frozen=True, eq=False)
class QuasiSpectrum:
    """Quasienergies sorted ascending inside the zone (-omega/2, omega/2]."""

    values: np.ndarray
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        vals = np.sort(np.asarray(self.values, dtype=float))
        half = 0.5 * self.omega
        slack = 1e-9 * self.omega
        if vals.size and (vals[0] <= -half - slack or vals[-1] > half + slack):
            raise ValueError("quasienergies outside the first zone")
        object.__setattr__(self, "values", vals)

    @property
    def zone(self):
        return (-0.5 * self.omega, 0.5 * self.omega)


def reduce_to_zone(values, omega):
    """Map values into (-omega/2, omega/2] by subtracting multiples of omega."""
    x = np.asarray(values, dtype=float)
    out = x - omega * np.ceil(x / omega - 0.5)
    return out if x.ndim else float(out)


def _as_unitary_matrix(u):
    if isinstance(u, Unitary):
        return u.matrix
    m = np.asarray(u, dtype=complex)
    defect = unitarity_defect(m)
    if defect > _UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    return m


def expm_hermitian(h, t):
    """exp(-i t H) through eigendecomposition; unitary up to roundoff."""
    hm = as_hermitian(h)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("duration must be finite")
    w, v = np.linalg.eigh(hm)
    u = (v * np.exp(-1j * t * w)) @ v.conj().T
    return Unitary(u, (0.0, t))


def step_propagator(pattern):
    """Ordered product exp(-i tau_n H_n) ... exp(-i tau_1 H_1) over one period."""
    if not isinstance(pattern, StepPattern):
        pattern = StepPattern(tuple(pattern))
    u = np.eye(pattern.dim, dtype=complex)
    for h, tau in pattern.steps:
        u = expm_hermitian(h, tau).matrix @ u
    return Unitary(u, (0.0, pattern.period))


def step_evolve(pattern, t):
    """U(t, 0) of a periodically repeated step pattern.

    Whole periods use the one-period propagator; the step straddling t is
    split exactly.
    """
    if not isinstance(pattern, StepPattern):
        pattern = StepPattern(tuple(pattern))
    t = float(t)
    if t < 0:
        raise ValueError("t must be non-negative")
    period = pattern.period
    n_full = int(math.floor(t / period))
    remainder = t - n_full * period
    if remainder >= period:  # float round-up at a period boundary
        remainder -= period
        n_full += 1
    u = np.linalg.matrix_power(step_propagator(pattern).matrix, n_full)
    left = remainder
    for h, tau in pattern.steps:
        if left <= 0:
            break
        dt = min(tau, left)
        u = expm_hermitian(h, dt).matrix @ u
        left -= dt
    return Unitary(u, (0.0, t))


def _expm_batch(hs, dt):
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * dt * w)
    return np.einsum("nij,nj,nkj->nik", v, phases, v.conj())


def _sample_hamiltonian(h, times):
    """Stack H(t) over a time grid, preferring one vectorized call.

    A callable may return the full (n, d, d) stack for an array argument;
    otherwise it is evaluated per time point.
    """
    try:
        hs = np.asarray(h(times), dtype=complex)
    except Exception:
        hs = None
    if hs is None or hs.ndim != 3 or hs.shape[0] != times.size or hs.shape[1] != hs.shape[2]:
        hs = np.stack([as_hermitian(h(t)) for t in times])
        return hs
    scale = max(1.0, float(np.abs(hs).max()))
    dag = np.conj(np.swapaxes(hs, -1, -2))
    if float(np.abs(hs - dag).max()) > _HERMITIAN_TOL * scale:
        raise ValueError("Hamiltonian samples are not Hermitian")
    return 0.5 * (hs + dag)


def evolve(h, t_end, n_steps=None, t_start=0.0, order=2):
    """Integrate i dU/dt = H(t) U across [t_start, t_end].

    Parameters
    ----------
    h : callable
        Maps a time to a Hermitian matrix; a callable that accepts an array
        of times and returns the matching (n, d, d) stack avoids per-step
        Python overhead.
    t_end, t_start : float
        Integration span.
    n_steps : int, optional
        Number of fixed steps across the span (default: default_steps()).
    order : {2, 4}
        2 selects midpoint-exponential stepping, exp(-i dt H(t_mid)) per
        step: exactly unitary, second-order accurate. 4 selects a
        two-exponential commutator-free scheme on Gauss nodes for stiff
        drives.

    Returns
    -------
    Unitary
        U(t_end, t_start), exactly unitary per step up to roundoff.
    """
    if n_steps is None:
        n_steps = default_steps()
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    t_start = float(t_start)
    t_end = float(t_end)
    span = t_end - t_start
    if span == 0.0:
        dim = as_hermitian(h(t_start)).shape[0]
        return Unitary(np.eye(dim, dtype=complex), (t_start, t_end))
    dt = span / n_steps
    base = t_start + dt * np.arange(n_steps)
    if order == 2:
        steps = _expm_batch(_sample_hamiltonian(h, base + 0.5 * dt), dt)
    else:
        h1 = _sample_hamiltonian(h, base + _GAUSS_C1 * dt)
        h2 = _sample_hamiltonian(h, base + _GAUSS_C2 * dt)
        first = _expm_batch(_CF4_A1 * h1 + _CF4_A2 * h2, dt)
        second = _expm_batch(_CF4_A2 * h1 + _CF4_A1 * h2, dt)
        steps = np.matmul(second, first)
    return Unitary(chain_matmul(steps), (t_start, t_end))


def floquet_hamiltonian(u, t_period):
    """Principal-branch generator F with exp(-i T F) = U.

    Every eigenvalue of F lies in (-omega/2, omega/2], omega = 2 pi / T; the
    closed end of the zone owns eigenphases that land exactly on the branch
    cut. Any other generator of the same U differs by multiples of omega on
    eigenspaces. Degenerate eigenphases share one phase, so the unitary
    eigenbasis from the Schur form introduces no ordering ambiguity.
    """
    m = _as_unitary_matrix(u)
    t_period = float(t_period)
    if not t_period > 0:
        raise ValueError("period must be positive")
    omega = TWO_PI / t_period
    tri, z = scipy.linalg.schur(m, output="complex")
    phases = np.angle(np.diagonal(tri))
    f = reduce_to_zone(-phases / t_period, omega)
    fm = (z * f) @ z.conj().T
    return 0.5 * (fm + fm.conj().T)


def quasienergies(u, t_period):
    """Quasienergy spectrum of a one-period propagator, sorted ascending."""
    m = _as_unitary_matrix(u)
    t_period = float(t_period)
    if not t_period > 0:
        raise ValueError("period must be positive")
    omega = TWO_PI / t_period
    phases = np.angle(np.linalg.eigvals(m))
    return QuasiSpectrum(reduce_to_zone(-phases / t_period, omega), omega)


def epicycle(h, f, t, n_steps=None):
    """Periodic factor G(t) = U(t, 0) exp(+i t F) of the evolution.

    When F generates the one-period propagator of the drive, G closes up,
    G(n T) = 1, and exp(-i t F) carries the secular part of the motion.
    """
    u = evolve(h, t, n_steps)
    g = u.matrix @ expm_hermitian(f, -float(t)).matrix
    return Unitary(g, (0.0, float(t)))


def instantaneous_spectrum(h):
    """Eigenvalues of a frozen Hamiltonian, ascending."""
    return np.linalg.eigvalsh(as_hermitian(h))
