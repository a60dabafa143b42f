"""Periodic scalar drive profiles beta(t) shared by the oscillator solvers."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * math.pi

PROFILE_KINDS = ("constant", "steps", "sin", "offset_sin")


class ProfileError(ValueError):
    """Invalid drive-profile definition (bad kind, field, or value)."""


@dataclass(frozen=True)
class DriveProfile:
    """A T-periodic scalar drive beta(t).

    kind    one of PROFILE_KINDS
    beta0   constant value, sine amplitude, or sine offset
    beta1   sine amplitude of the offset_sin kind
    omega   angular frequency of the sinusoidal kinds (period = 2 pi / omega)
    steps   ((beta, tau), ...) for the steps kind; period = sum of tau
    period  drive period T
    """

    kind: str
    beta0: float = 0.0
    beta1: float = 0.0
    omega: float = 0.0
    steps: tuple = ()
    period: float = 1.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ProfileError(f"field 'kind' must be one of {PROFILE_KINDS}, got {self.kind!r}")
        if self.kind in ("sin", "offset_sin") and not self.omega > 0:
            raise ProfileError(f"field 'omega' must be positive for kind {self.kind!r}")
        if self.kind == "steps":
            if not self.steps:
                raise ProfileError("field 'steps' needs at least one (beta, tau) pair")
            norm = []
            for i, pair in enumerate(self.steps):
                beta, tau = float(pair[0]), float(pair[1])
                if not tau > 0:
                    raise ProfileError(f"field 'steps'[{i}]: duration must be positive")
                norm.append((beta, tau))
            object.__setattr__(self, "steps", tuple(norm))
            object.__setattr__(self, "period", sum(tau for _, tau in norm))
        if not self.period > 0:
            raise ProfileError("field 'period' must be positive")

    @staticmethod
    def constant(beta0, period=1.0):
        return DriveProfile("constant", beta0=float(beta0), period=float(period))

    @staticmethod
    def from_steps(steps):
        return DriveProfile("steps", steps=tuple(steps))

    @staticmethod
    def sinusoid(beta0, omega):
        """beta(t) = beta0 sin(omega t)."""
        if not float(omega) > 0:
            raise ProfileError("field 'omega' must be positive for kind 'sin'")
        return DriveProfile("sin", beta0=float(beta0), omega=float(omega),
                            period=TWO_PI / float(omega))

    @staticmethod
    def offset_sinusoid(beta0, beta1, omega):
        """beta(t) = beta0 + beta1 sin(omega t)."""
        if not float(omega) > 0:
            raise ProfileError("field 'omega' must be positive for kind 'offset_sin'")
        return DriveProfile("offset_sin", beta0=float(beta0), beta1=float(beta1),
                            omega=float(omega), period=TWO_PI / float(omega))


def eval_beta(profile, t):
    """beta(t) with periodic wrap-around; accepts scalars or arrays."""
    tt = np.asarray(t, dtype=float)
    if profile.kind == "constant":
        out = np.full(tt.shape, profile.beta0)
    elif profile.kind == "sin":
        out = profile.beta0 * np.sin(profile.omega * tt)
    elif profile.kind == "offset_sin":
        out = profile.beta0 + profile.beta1 * np.sin(profile.omega * tt)
    else:
        local = np.mod(tt, profile.period)
        edges = np.cumsum([tau for _, tau in profile.steps])
        idx = np.minimum(np.searchsorted(edges, local, side="right"), len(edges) - 1)
        out = np.asarray([beta for beta, _ in profile.steps])[idx]
    return out if tt.ndim else float(out)


def beta_period_integral(profile):
    """Integral of beta over one period, evaluated in closed form."""
    if profile.kind == "constant":
        return profile.beta0 * profile.period
    if profile.kind == "steps":
        return sum(beta * tau for beta, tau in profile.steps)
    if profile.kind == "sin":
        return 0.0
    return profile.beta0 * profile.period


def with_amplitude(profile, beta0):
    """Member of the profile's amplitude family with overall scale beta0.

    For constant/sin/offset_sin the beta0 field is replaced; for steps the
    listed beta values are treated as a unit-amplitude pulse shape and are
    scaled by beta0.
    """
    if profile.kind == "steps":
        scaled = tuple((beta0 * beta, tau) for beta, tau in profile.steps)
        return replace(profile, steps=scaled)
    return replace(profile, beta0=float(beta0))


def _step_segments(profile, t_start, t_end):
    durations = [tau for _, tau in profile.steps]
    betas = [beta for beta, _ in profile.steps]
    period = profile.period
    edges = np.concatenate([[0.0], np.cumsum(durations)])
    out_dt, out_beta = [], []
    t = float(t_start)
    guard = 1e-12 * period
    while t < t_end - guard:
        k = math.floor(t / period)
        local = t - k * period
        if local >= period:  # float round-up at a period boundary
            local -= period
            k += 1
        idx = min(int(np.searchsorted(edges, local + guard, side="right")) - 1,
                  len(betas) - 1)
        seg_end = k * period + edges[idx + 1]
        nxt = min(seg_end, t_end)
        if nxt <= t:
            break
        out_dt.append(nxt - t)
        out_beta.append(betas[idx])
        t = nxt
    return np.asarray(out_dt), np.asarray(out_beta)


def integration_segments(profile, t_start, t_end, n_steps):
    """Frozen-coefficient grid (dts, betas) covering [t_start, t_end].

    Piecewise-constant kinds split exactly at their discontinuities and
    ignore n_steps; the sinusoidal kinds use n_steps uniform midpoint
    samples.
    """
    span = float(t_end) - float(t_start)
    if span < 0:
        raise ValueError("t_end must not precede t_start")
    if span == 0:
        return np.empty(0), np.empty(0)
    if profile.kind == "constant":
        return np.array([span]), np.array([profile.beta0])
    if profile.kind == "steps":
        return _step_segments(profile, t_start, t_end)
    n = max(1, int(n_steps))
    dt = span / n
    mids = t_start + (np.arange(n) + 0.5) * dt
    return np.full(n, dt), eval_beta(profile, mids)


_JSON_FIELDS = {
    "constant": (("beta0",), ("omega", "period")),
    "steps": (("steps",), ()),
    "sin": (("beta0", "omega"), ()),
    "offset_sin": (("beta0", "beta1", "omega"), ()),
}


def _json_number(obj, key):
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProfileError(f"field {key!r} must be a number")
    return float(value)


def profile_from_json(source):
    """Build a DriveProfile from a JSON object (text or dict).

    Schema: {"kind": "constant"|"steps"|"sin"|"offset_sin", "beta0": num,
    "beta1": num?, "omega": num?, "steps": [[beta, tau], ...]?}; constant
    profiles also accept an explicit "period" (default 1.0, or 2 pi / omega
    when "omega" is given). Errors name the offending field.
    """
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ProfileError(f"invalid profile JSON: {exc}") from None
    else:
        obj = source
    if not isinstance(obj, dict):
        raise ProfileError("profile must be a JSON object")
    kind = obj.get("kind")
    if kind not in PROFILE_KINDS:
        raise ProfileError(f"field 'kind' must be one of {PROFILE_KINDS}, got {kind!r}")
    required, optional = _JSON_FIELDS[kind]
    for key in obj:
        if key != "kind" and key not in required and key not in optional:
            raise ProfileError(f"unexpected field {key!r} for kind {kind!r}")
    for key in required:
        if key not in obj:
            raise ProfileError(f"missing field {key!r} for kind {kind!r}")

    if kind == "steps":
        raw = obj["steps"]
        if not isinstance(raw, list) or not raw:
            raise ProfileError("field 'steps' must be a non-empty list of [beta, tau] pairs")
        steps = []
        for i, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ProfileError(f"field 'steps'[{i}] must be a [beta, tau] pair")
            beta, tau = pair
            if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair):
                raise ProfileError(f"field 'steps'[{i}] must contain numbers")
            if not tau > 0:
                raise ProfileError(f"field 'steps'[{i}]: duration must be positive")
            steps.append((float(beta), float(tau)))
        return DriveProfile.from_steps(steps)

    beta0 = _json_number(obj, "beta0")
    if kind == "sin":
        return DriveProfile.sinusoid(beta0, _json_number(obj, "omega"))
    if kind == "offset_sin":
        return DriveProfile.offset_sinusoid(beta0, _json_number(obj, "beta1"),
                                            _json_number(obj, "omega"))
    if "omega" in obj:
        omega = _json_number(obj, "omega")
        if not omega > 0:
            raise ProfileError("field 'omega' must be positive")
        return DriveProfile.constant(beta0, TWO_PI / omega)
    period = _json_number(obj, "period") if "period" in obj else 1.0
    return DriveProfile.constant(beta0, period)


def profile_to_json(profile):
    """Dict form of a profile matching the profile_from_json schema."""
    if profile.kind == "steps":
        return {"kind": "steps", "steps": [[beta, tau] for beta, tau in profile.steps]}
    if profile.kind == "sin":
        return {"kind": "sin", "beta0": profile.beta0, "omega": profile.omega}
    if profile.kind == "offset_sin":
        return {"kind": "offset_sin", "beta0": profile.beta0, "beta1": profile.beta1,
                "omega": profile.omega}
    return {"kind": "constant", "beta0": profile.beta0, "period": profile.period}
