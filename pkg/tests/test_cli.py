import json
import math

import numpy as np
import pytest

from floqtools import cli
from floqtools import spin_quasienergy_spacing, SpinParams

TWO_PI = 2.0 * math.pi

SIN_PROFILE = '{"kind": "sin", "beta0": 1.0, "omega": 6.283185307179586}'
CONST_PROFILE = '{"kind": "constant", "beta0": 1.0}'
TWO_STEP_PATTERN = json.dumps({
    "steps": [
        {"hamiltonian": [[0.5, 0.0], [0.0, -0.5]], "duration": 1.0},
        {"hamiltonian": [[1.5, 0.0], [0.0, -1.5]], "duration": 1.0},
    ]
})


def run_cli(*argv):
    return cli.main(list(argv))


def test_unknown_command_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli("no-such-command")
    assert excinfo.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_missing_required_flag_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        run_cli("osc-spectrum", "--profile", SIN_PROFILE)
    assert excinfo.value.code == 2


def test_invalid_profile_names_the_field(capsys):
    code = run_cli("osc-spectrum", "--profile", '{"kind": "sin", "beta0": 1.0}',
                   "--beta0-min", "0", "--beta0-max", "1", "--points", "3")
    assert code == 2
    assert "'omega'" in capsys.readouterr().err


def test_no_root_in_bracket_exits_3(capsys):
    code = run_cli("osc-loop-find", "--profile", CONST_PROFILE,
                   "--bracket", "2.0", "2.5")
    assert code == 3
    assert "bracket" in capsys.readouterr().err


def test_osc_spectrum_is_deterministic(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        code = run_cli("osc-spectrum", "--profile", SIN_PROFILE,
                       "--beta0-min", "0", "--beta0-max", "4", "--points", "9",
                       "--steps", "512", "-o", str(out))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "beta0,trace,stability,omega_F"
    assert len(lines) == 10
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert first[2] == "parabolic"


def test_osc_spectrum_profile_from_file(tmp_path):
    profile_path = tmp_path / "sin.json"
    profile_path.write_text(SIN_PROFILE)
    out = tmp_path / "scan.csv"
    code = run_cli("osc-spectrum", "--profile", str(profile_path),
                   "--beta0-min", "2", "--beta0-max", "2.5", "--points", "3",
                   "--steps", "1024", "-o", str(out))
    assert code == 0
    assert out.read_text().startswith("beta0,trace,stability,omega_F\n")


def test_osc_loop_find_constant_family(tmp_path):
    out = tmp_path / "loop.json"
    code = run_cli("osc-loop-find", "--profile", CONST_PROFILE,
                   "--bracket", "1.0", "2.0", "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["beta0_star"] == pytest.approx(math.pi / 2, abs=1e-6)
    assert report["loop_order"] == 4
    assert report["loop_deviation"] < 1e-6


def test_osc_trajectory_csv(tmp_path):
    out = tmp_path / "path.csv"
    code = run_cli("osc-trajectory", "--profile", CONST_PROFILE,
                   "--q0", "1", "--p0", "0", "--t-end", "2.0",
                   "--samples", "16", "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,q,p"
    assert len(lines) == 18


def test_planar_loop_report(tmp_path):
    out = tmp_path / "loop.json"
    code = run_cli("planar-loop", "--beta0", "0.78539", "--beta1", "0.94595",
                   "--omega", str(TWO_PI), "--periods", "24", "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["is_loop"] is True
    assert report["deviation"] < 1e-2
    assert abs(report["theta"] - 6 * math.pi) < 1e-3


def test_planar_loop_polish(tmp_path):
    out = tmp_path / "loop.json"
    code = run_cli("planar-loop", "--beta0", str(math.pi / 4), "--beta1", "0.94595",
                   "--omega", str(TWO_PI), "--periods", "24", "--polish",
                   "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert abs(report["beta1_polished"] - 0.94595) < 1e-3
    assert report["polished_deviation"] < 1e-6


def test_stability_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    code = run_cli("stability-scan", "--omega", str(TWO_PI),
                   "--alpha-min", "0.1", "--alpha-max", "0.9", "--points", "5",
                   "--steps", "1024", "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,trace,stable"
    values = [line.split(",") for line in lines[1:]]
    assert values[0][2] == "true"
    assert values[-1][2] == "false"


def test_stability_scan_threshold_mode(tmp_path):
    out = tmp_path / "threshold.json"
    code = run_cli("stability-scan", "--omega", str(TWO_PI), "--find-threshold",
                   "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["alpha_star"] == pytest.approx(0.5735, abs=5e-4)


def test_spin_spectrum_single_point(tmp_path):
    out = tmp_path / "spin.csv"
    code = run_cli("spin-spectrum", "--mu", "1", "--B", "0", "--omega", "1",
                   "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "muB_over_homega,deltaE_formula,deltaE_numeric"
    ratio, formula, numeric = (float(v) for v in lines[1].split(","))
    assert ratio == 0.0
    assert formula == 0.0
    assert abs(numeric) < 1e-10


def test_spin_spectrum_sweep(tmp_path):
    out = tmp_path / "spin.csv"
    code = run_cli("spin-spectrum", "--mu", "1", "--omega", "1",
                   "--points", "3", "--ratio-min", "0.1", "--ratio-max", "10",
                   "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    for line in lines[1:]:
        ratio, formula, numeric = (float(v) for v in line.split(","))
        expected = spin_quasienergy_spacing(SpinParams(1.0, ratio, 1.0))
        assert formula == pytest.approx(expected, rel=1e-12)
        assert numeric == pytest.approx(formula, abs=1e-7)


def test_step_floquet_lines(tmp_path):
    out = tmp_path / "lines.csv"
    code = run_cli("step-floquet", "--pattern", TWO_STEP_PATTERN, "-o", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "line_kind,energy"
    table = {}
    for line in lines[1:]:
        kind, energy = line.split(",")
        table.setdefault(kind, []).append(float(energy))
    assert table["instantaneous_1"] == pytest.approx([-0.5, 0.5])
    assert table["instantaneous_2"] == pytest.approx([-1.5, 1.5])
    # commuting two-step pattern: average generator diag(1, -1), zone pi
    assert table["floquet"] == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_step_floquet_rejects_bad_pattern(capsys):
    code = run_cli("step-floquet", "--pattern", '{"steps": []}')
    assert code == 2
    assert "steps" in capsys.readouterr().err


def test_fields_probe_rotating(tmp_path):
    out = tmp_path / "probe.json"
    code = run_cli("fields-probe", "--amplitude", "1.0", "--omega", str(TWO_PI),
                   "--x", "0", "0", "0", "--t", "0.25", "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["vector_potential"] == pytest.approx([0.0, 0.0, 0.0])
    expected = TWO_PI * np.array([math.cos(TWO_PI * 0.25), 0.0, math.sin(TWO_PI * 0.25)])
    assert report["magnetic_field_fd"] == pytest.approx(list(expected), abs=1e-7)
    assert report["magnetic_field_nodal"] == pytest.approx(list(expected), abs=1e-12)


def test_fields_probe_standing_mode(tmp_path):
    out = tmp_path / "probe.json"
    code = run_cli("fields-probe", "--amplitude", "2.0", "--omega", "1.0",
                   "--x", "0", "0", "0", "--t", "0.5", "--mode", "standing",
                   "-o", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["magnetic_field_fd"] == pytest.approx(
        report["magnetic_field_nodal"], abs=1e-7)
