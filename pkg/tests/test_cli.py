"""cli: subcommand behaviour, exit codes, reproducible JSON reports."""

import json
import pathlib

import pytest

from detmethod.cli import main

DATA = pathlib.Path(__file__).parent / "data"
PARABOLA = str(DATA / "parabola.ideal")
CONIC = str(DATA / "conic.ideal")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- hilbert ---------------------------------------------------------------


def test_hilbert_json(capsys):
    code, out, _ = run(
        capsys, "hilbert", "--ideal", CONIC, "--mode", "projective",
        "--s-min", "1", "--s-max", "5",
    )
    assert code == 0
    rows = json.loads(out)
    assert [r["hf"] for r in rows] == [3, 5, 7, 9, 11]
    assert sum(rows[1]["sigma"]) == 2 * 5  # s * HF at s=2


def test_hilbert_csv(capsys):
    code, out, _ = run(
        capsys, "hilbert", "--ideal", PARABOLA, "--output", "csv", "--s-max", "3"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("s,hf,")
    assert lines[1].split(",")[:2] == ["1", "3"]


# -- points ----------------------------------------------------------------


def test_points_affine(capsys):
    code, out, _ = run(
        capsys, "points", "--ideal", PARABOLA, "--height", "100"
    )
    assert code == 0
    pts = json.loads(out)
    assert len(pts) == 21


def test_points_projective(capsys):
    code, out, _ = run(
        capsys, "points", "--ideal", CONIC, "--mode", "projective",
        "--heights", "4,4,4",
    )
    assert code == 0
    assert len(json.loads(out)) == 8


# -- construct -------------------------------------------------------------


def test_construct_affine(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "construct", "--ideal", PARABOLA, "--height", "100",
        "--delta", "2", "--out", str(out_file),
    )
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["point_count"] == 21
    assert data["certificate_count"] >= 1
    assert data["vacuous"] is False


def test_construct_requires_delta_xor_epsilon(capsys):
    code, _, err = run(
        capsys, "construct", "--ideal", PARABOLA, "--height", "10"
    )
    assert code == 2
    assert "delta" in err


def test_construct_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(
            capsys, "construct", "--ideal", CONIC, "--mode", "projective",
            "--heights", "4,4,4", "--delta", "2", "--out", str(path),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_construct_timings_flag(capsys, tmp_path):
    out_file = tmp_path / "t.json"
    code, _, _ = run(
        capsys, "construct", "--ideal", PARABOLA, "--height", "25",
        "--delta", "2", "--timings", "--out", str(out_file),
    )
    assert code == 0
    assert "timings" in json.loads(out_file.read_text())


# -- verify ----------------------------------------------------------------


@pytest.fixture
def parabola_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "construct", "--ideal", PARABOLA, "--height", "100",
        "--delta", "2", "--out", str(path),
    )
    assert code == 0
    return path


def test_verify_passes_on_genuine_report(capsys, parabola_report):
    code, out, _ = run(
        capsys, "verify", "--report", str(parabola_report), "--ideal", PARABOLA
    )
    assert code == 0
    assert out.startswith("PASS")


def test_verify_catches_tampered_coefficient(capsys, parabola_report):
    data = json.loads(parabola_report.read_text())
    poly = data["certificates"][0]["poly"]
    data["certificates"][0]["poly"] = poly + " + 1"
    parabola_report.write_text(json.dumps(data))
    code, out, _ = run(
        capsys, "verify", "--report", str(parabola_report), "--ideal", PARABOLA
    )
    assert code == 1
    assert "FAIL" in out


def test_verify_catches_dropped_point(capsys, parabola_report):
    data = json.loads(parabola_report.read_text())
    data["certificates"][0]["points"].pop()
    parabola_report.write_text(json.dumps(data))
    code, out, _ = run(
        capsys, "verify", "--report", str(parabola_report), "--ideal", PARABOLA
    )
    assert code == 1
    assert "coverage" in out


def test_verify_catches_support_violation(capsys, parabola_report):
    data = json.loads(parabola_report.read_text())
    # x1^2 is the conic's leading monomial: outside every staircase
    data["certificates"][0]["poly"] += " + x1^2"
    parabola_report.write_text(json.dumps(data))
    code, out, _ = run(
        capsys, "verify", "--report", str(parabola_report), "--ideal", PARABOLA
    )
    assert code == 1
    assert "LT" in out or "vanish" in out


def test_verify_missing_report(capsys):
    code, _, err = run(
        capsys, "verify", "--report", "/nonexistent.json", "--ideal", PARABOLA
    )
    assert code == 2
    assert "error" in err


# -- sweep / bound ---------------------------------------------------------


def test_sweep_csv(capsys):
    code, out, _ = run(
        capsys, "sweep", "--ideal", PARABOLA, "--height-list", "25,100",
        "--delta", "2",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "B,N,certificates,k_actual,k_bound"
    assert lines[1].split(",")[:2] == ["25", "11"]
    assert lines[2].split(",")[:2] == ["100", "21"]


def test_bound_worked_example(capsys):
    code, out, _ = run(
        capsys, "bound", "--mu", "3", "--m", "1", "--norms", "1,1,1",
        "--r", "1/8", "--output", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert (data["nu"], data["e"]) == (2, 3)
    assert data["bound"] == pytest.approx(162 / 512, rel=1e-12)


# -- exit codes ------------------------------------------------------------


def test_malformed_ideal_file(capsys, tmp_path):
    bad = tmp_path / "bad.ideal"
    bad.write_text("vars: 2\nx0 + @\n")
    code, _, err = run(capsys, "points", "--ideal", str(bad), "--height", "5")
    assert code == 2
    assert "error" in err


def test_missing_vars_header(capsys, tmp_path):
    bad = tmp_path / "bad.ideal"
    bad.write_text("x0 + 1\n")
    code, _, _ = run(capsys, "points", "--ideal", str(bad), "--height", "5")
    assert code == 2


def test_budget_exit_code(capsys):
    code, _, err = run(
        capsys, "points", "--ideal", CONIC, "--mode", "projective",
        "--heights", "1000,1000,1000", "--budget", "100",
    )
    assert code == 3
    assert "error" in err


def test_degenerate_ideal_exit_code(capsys):
    code, _, _ = run(
        capsys, "construct", "--ideal", str(DATA / "single_point.ideal"),
        "--height", "10", "--delta", "2",
    )
    assert code == 2
