"""Command-line interface: spectra sweeps, loop searches, and field probes.

All commands emit CSV or JSON data suitable for external plotting; output is
deterministic byte for byte for identical invocations. Exit codes: 0 on
success, 2 for configuration errors, 3 for numerical failures such as a
root bracket without a sign change.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from . import fields, hill, planar_charge, spin_resonance
from .profiles import DriveProfile, ProfileError, profile_from_json, with_amplitude
from .propagator import (
    StepPattern,
    instantaneous_spectrum,
    quasienergies,
    step_propagator,
)

TWO_PI = 2.0 * math.pi


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _write_text(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _emit_csv(header, rows, path):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _write_text("\n".join(lines) + "\n", path)


def _emit_json(obj, path):
    _write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)


def _load_json_source(value, what):
    """Accept inline JSON or a path to a JSON file."""
    text = value
    if not value.lstrip().startswith("{"):
        try:
            with open(value) as handle:
                text = handle.read()
        except OSError as exc:
            raise ProfileError(f"cannot read {what} file {value!r}: {exc}") from None
    return text


def _load_profile(value):
    return profile_from_json(_load_json_source(value, "profile"))


def _matrix_entry(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    raise ProfileError(f"field {where} must be a number or an [re, im] pair")


def _load_pattern(value):
    """Step-pattern JSON: {"steps": [{"hamiltonian": [[...]], "duration": tau}, ...]}.

    Matrix entries are numbers or [re, im] pairs.
    """
    try:
        obj = json.loads(_load_json_source(value, "pattern"))
    except json.JSONDecodeError as exc:
        raise ProfileError(f"invalid pattern JSON: {exc}") from None
    if not isinstance(obj, dict) or "steps" not in obj:
        raise ProfileError("missing field 'steps' in the step pattern")
    raw_steps = obj["steps"]
    if not isinstance(raw_steps, list) or not raw_steps:
        raise ProfileError("field 'steps' must be a non-empty list")
    steps = []
    for i, entry in enumerate(raw_steps):
        if not isinstance(entry, dict):
            raise ProfileError(f"field 'steps'[{i}] must be an object")
        for key in entry:
            if key not in ("hamiltonian", "duration"):
                raise ProfileError(f"unexpected field {key!r} in 'steps'[{i}]")
        if "hamiltonian" not in entry or "duration" not in entry:
            raise ProfileError(f"field 'steps'[{i}] needs 'hamiltonian' and 'duration'")
        rows = entry["hamiltonian"]
        if not isinstance(rows, list) or not rows:
            raise ProfileError(f"field 'steps'[{i}].hamiltonian must be a matrix")
        matrix = []
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != len(rows):
                raise ProfileError(f"field 'steps'[{i}].hamiltonian must be square")
            matrix.append([_matrix_entry(v, f"'steps'[{i}].hamiltonian[{r}]") for v in row])
        duration = entry["duration"]
        if isinstance(duration, bool) or not isinstance(duration, (int, float)) or not duration > 0:
            raise ProfileError(f"field 'steps'[{i}].duration must be a positive number")
        steps.append((np.array(matrix, dtype=complex), float(duration)))
    try:
        return StepPattern(tuple(steps))
    except ValueError as exc:
        raise ProfileError(f"invalid step pattern: {exc}") from None


def _cmd_osc_spectrum(args):
    profile = _load_profile(args.profile)
    grid = np.linspace(args.beta0_min, args.beta0_max, args.points)
    rows = hill.omega_F_scan(lambda b: with_amplitude(profile, b), grid, args.steps)
    _emit_csv(("beta0", "trace", "stability", "omega_F"), rows, args.output)
    return 0


def _cmd_osc_loop_find(args):
    profile = _load_profile(args.profile)
    family = lambda b: with_amplitude(profile, b)  # noqa: E731
    beta0 = hill.find_loop_beta(family, args.angle, tuple(args.bracket), args.steps)
    order = hill.loop_order_for_angle(args.angle)
    report = {
        "beta0_star": beta0,
        "target_angle": args.angle,
        "loop_order": order,
    }
    if order is not None:
        report["loop_deviation"] = hill.loop_deviation(
            hill.monodromy(family(beta0), args.steps), order)
    _emit_json(report, args.output)
    return 0


def _cmd_osc_trajectory(args):
    profile = _load_profile(args.profile)
    path = hill.classical_trajectory(profile, (args.q0, args.p0), args.t_end,
                                     args.samples)
    _emit_csv(("t", "q", "p"), [tuple(row) for row in path], args.output)
    return 0


def _cmd_planar_loop(args):
    profile = DriveProfile.offset_sinusoid(args.beta0, args.beta1, args.omega)
    is_loop, deviation = planar_charge.planar_loop_check(
        profile, args.periods, args.tol, args.steps)
    theta, _ = planar_charge.rotating_frame_reduction(profile, args.periods, args.steps)
    report = {
        "beta0": args.beta0,
        "beta1": args.beta1,
        "omega": args.omega,
        "periods": args.periods,
        "deviation": deviation,
        "is_loop": is_loop,
        "theta": theta,
        "theta_mod_2pi": theta % TWO_PI,
    }
    if args.polish:
        beta1_star = planar_charge.polish_loop_beta1(
            args.beta0, args.beta1, args.omega, args.periods, args.steps)
        polished = DriveProfile.offset_sinusoid(args.beta0, beta1_star, args.omega)
        _, polished_dev = planar_charge.planar_loop_check(
            polished, args.periods, args.tol, args.steps)
        report["beta1_polished"] = beta1_star
        report["polished_deviation"] = polished_dev
    _emit_json(report, args.output)
    return 0


def _cmd_stability_scan(args):
    if args.find_threshold:
        alpha_star = planar_charge.stability_threshold(
            args.omega, tuple(args.bracket), args.steps)
        _emit_json({"alpha_star": alpha_star, "omega": args.omega}, args.output)
        return 0
    grid = np.linspace(args.alpha_min, args.alpha_max, args.points)
    rows = []
    for alpha in grid:
        profile = DriveProfile.sinusoid(2.0 * alpha * args.omega, args.omega)
        trace = float(np.trace(hill.monodromy(profile, args.steps)))
        rows.append((float(alpha), trace, abs(trace) <= 2.0))
    _emit_csv(("alpha", "trace", "stable"), rows, args.output)
    return 0


def _cmd_spin_spectrum(args):
    if args.points is not None:
        if args.mu == 0:
            raise ProfileError("field 'mu' must be nonzero for a ratio sweep")
        ratios = np.logspace(math.log10(args.ratio_min), math.log10(args.ratio_max),
                             args.points)
    else:
        ratios = [abs(args.mu * args.B) / args.omega]
    rows = []
    for ratio in ratios:
        if args.points is not None:
            params = spin_resonance.SpinParams(
                args.mu, ratio * args.omega / abs(args.mu), args.omega)
        else:
            params = spin_resonance.SpinParams(args.mu, args.B, args.omega)
        rows.append((
            float(ratio),
            spin_resonance.spin_quasienergy_spacing(params),
            spin_resonance.spin_spacing_from_propagator(params, args.steps),
        ))
    _emit_csv(("muB_over_homega", "deltaE_formula", "deltaE_numeric"), rows, args.output)
    return 0


def _cmd_step_floquet(args):
    pattern = _load_pattern(args.pattern)
    rows = []
    for i, (h, _) in enumerate(pattern.steps):
        for energy in instantaneous_spectrum(h):
            rows.append((f"instantaneous_{i + 1}", float(energy)))
    spectrum = quasienergies(step_propagator(pattern), pattern.period)
    for energy in spectrum.values:
        rows.append(("floquet", float(energy)))
    _emit_csv(("line_kind", "energy"), rows, args.output)
    return 0


def _cmd_fields_probe(args):
    trap = fields.TrapField(args.amplitude, args.omega, args.light_speed)
    x = np.asarray(args.x, dtype=float)
    if args.mode == "rotating":
        potential = fields.vector_potential_rotating(trap, x, args.t)
        limit = fields.rotating_nodal_field(trap, args.t)
        fd = fields.magnetic_field_fd(
            lambda xx, tt: fields.vector_potential_rotating(trap, xx, tt),
            x, args.t, args.h)
    else:
        potential = fields.vector_potential_standing(trap, x, args.t)
        limit = fields.standing_nodal_field(trap, args.t)
        fd = fields.magnetic_field_fd(
            lambda xx, tt: fields.vector_potential_standing(trap, xx, tt),
            x, args.t, args.h)
    _emit_json({
        "mode": args.mode,
        "x": list(map(float, x)),
        "t": args.t,
        "vector_potential": list(map(float, potential)),
        "magnetic_field_fd": list(map(float, fd)),
        "magnetic_field_nodal": list(map(float, limit)),
        "h": args.h,
    }, args.output)
    return 0


def _add_common(parser):
    parser.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    parser.add_argument("--steps", type=int, default=None,
                        help="integrator steps per period (default: FLOQUET_STEPS or 4096)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="floqtools",
        description="Floquet spectra, stability charts, and evolution loops "
                    "of periodically driven systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("osc-spectrum", help="Floquet-frequency sweep of a drive family")
    p.add_argument("--profile", required=True, help="drive profile JSON (file or inline)")
    p.add_argument("--beta0-min", type=float, required=True)
    p.add_argument("--beta0-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_osc_spectrum)

    p = sub.add_parser("osc-loop-find", help="amplitude where the Floquet angle hits a target")
    p.add_argument("--profile", required=True)
    p.add_argument("--angle", type=float, default=math.pi / 2,
                   help="target Floquet angle omega_F*T in radians (default pi/2)")
    p.add_argument("--bracket", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    _add_common(p)
    p.set_defaults(func=_cmd_osc_loop_find)

    p = sub.add_parser("osc-trajectory", help="phase-plane trajectory of the driven oscillator")
    p.add_argument("--profile", required=True)
    p.add_argument("--q0", type=float, default=1.0)
    p.add_argument("--p0", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_osc_trajectory)

    p = sub.add_parser("planar-loop", help="loop check for the planar charge in an axial field")
    p.add_argument("--beta0", type=float, required=True)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-2)
    p.add_argument("--polish", action="store_true",
                   help="also refine beta1 onto the exact loop")
    _add_common(p)
    p.set_defaults(func=_cmd_planar_loop)

    p = sub.add_parser("stability-scan", help="stability chart of the sinusoidally driven trap")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--find-threshold", action="store_true",
                   help="bisect the first stability boundary instead of scanning")
    p.add_argument("--bracket", type=float, nargs=2, default=(0.3, 0.8), metavar=("LO", "HI"))
    _add_common(p)
    p.set_defaults(func=_cmd_stability_scan)

    p = sub.add_parser("spin-spectrum", help="resonance spacing of the rotating-field spin")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--points", type=int, default=None,
                   help="log-grid sweep of mu B / omega instead of a single point")
    p.add_argument("--ratio-min", type=float, default=1e-3)
    p.add_argument("--ratio-max", type=float, default=1e3)
    _add_common(p)
    p.set_defaults(func=_cmd_spin_spectrum)

    p = sub.add_parser("step-floquet",
                       help="instantaneous vs Floquet lines of a step pattern")
    p.add_argument("--pattern", required=True,
                   help="step pattern JSON (file or inline)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_step_floquet)

    p = sub.add_parser("fields-probe", help="trap vector potential and its field")
    p.add_argument("--amplitude", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--light-speed", type=float, default=1.0)
    p.add_argument("--x", type=float, nargs=3, required=True, metavar=("X", "Y", "Z"))
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--mode", choices=("rotating", "standing"), default="rotating")
    p.add_argument("--h", type=float, default=1e-5, help="finite-difference step")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_fields_probe)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProfileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except hill.NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
