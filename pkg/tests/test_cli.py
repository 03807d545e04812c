import csv
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from starq.cli import CSV_HEADER, main
from starq.oracle import solve_table

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("n", [1, 2])
def test_coeffs_golden(capsys, n):
    code, out, _ = run(capsys, "coeffs", "-n", str(n), "--max-deg", "3", "--r-max", "3")
    assert code == 0
    assert out == (GOLDEN / f"coeffs_n{n}_r3.csv").read_text()


@pytest.mark.parametrize("n", [1, 2])
def test_coeffs_golden_agrees_with_oracle(n):
    rows = list(csv.DictReader((GOLDEN / f"coeffs_n{n}_r3.csv").open()))
    assert list(rows[0]) == CSV_HEADER
    for row in rows:
        k, l = int(row["k"]), int(row["l"])
        idx = tuple(int(row[c]) for c in ("alpha", "beta", "gamma", "delta"))
        assert solve_table(n, k, l)[idx] == Fraction(row["value"])
    keys = [tuple(int(r[c]) for c in CSV_HEADER[:7]) for r in rows]
    assert keys == sorted(keys)


def test_coeffs_rows(capsys):
    _, out, _ = run(capsys, "coeffs", "-n", "2", "-k", "1", "-l", "1", "--r-max", "0")
    assert "2,1,1,0,0,0,0,1" in out.splitlines()
    _, out, _ = run(capsys, "coeffs", "-n", "3", "-k", "2", "-l", "1", "--r-max", "1")
    assert "3,2,1,1,0,0,0,1/2" in out.splitlines()
    _, out, _ = run(capsys, "coeffs", "-n", "1", "-k", "2", "-l", "0", "--r-max", "2")
    assert "1,2,0,2,0,0,0,1/6" in out.splitlines()


def test_coeffs_json(capsys):
    code, out, _ = run(capsys, "coeffs", "-n", "1", "-k", "1", "-l", "1", "--r-max", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert {"n": 1, "k": 1, "l": 1, "alpha": 1, "beta": 0, "gamma": 0, "delta": 0, "value": "1/2"} in data["rows"]


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["star", "-n", "1", "--route", "both", "xi1", "x1"], "star_xi1_x1_both.txt"),
        (["star", "-n", "2", "xi1", "xi2"], "star_xi1_xi2.txt"),
        (["star", "-n", "1", "1", "x1^3"], "star_1_x1cubed.txt"),
        (["star", "-n", "2", "--route", "both", "x1^2*xi1*xi2 + x2*xi1", "x1*x2^2*xi2^2", "--format", "json"],
         "star_n2_json.json"),
        (["quantize", "-n", "1", "--lambda", "1/2", "x1*xi1^2"], "quantize_x1xi1sq.txt"),
    ],
)
def test_golden_outputs(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_star_both_reports_equality(capsys):
    _, out, _ = run(capsys, "star", "-n", "1", "--route", "both", "xi1", "x1")
    assert out.splitlines() == ["explicit: x1*xi1 + 1/2*h", "quant: x1*xi1 + 1/2*h", "equal: true"]


def test_quantize_examples(capsys):
    _, out, _ = run(capsys, "quantize", "-n", "1", "--lambda", "1/2", "x1*xi1^2")
    assert out.splitlines()[0] == "x1*xi1^2 + h*xi1"
    _, out, _ = run(capsys, "quantize", "-n", "2", "--lambda", "1/3", "xi1")
    assert out.splitlines()[0] == "xi1"


def test_parse_error_exit(capsys):
    code, out, err = run(capsys, "quantize", "-n", "1", "x9")
    assert code == 2 and out == ""
    assert "x9" in err and "^" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["quantize", "-n", "0", "x1"],
        ["quantize", "--lambda", "1/0", "x1"],
        ["star", "-n", "2", "--geometry", "conformal:1,2", "x1", "x2"],
        ["verify", "star", "--geometry", "affine"],
        ["verify", "nonsense"],
        ["coeffs", "--r-max", "-1"],
        ["frobnicate"],
    ],
)
def test_config_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert "error" in err


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "coeffs", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 4


def test_out_file(capsys, tmp_path):
    target = tmp_path / "c.csv"
    code, out, _ = run(capsys, "coeffs", "-n", "1", "--max-deg", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (GOLDEN / "coeffs_n1_r3.csv").read_text()


def test_verify_bivectors(capsys):
    code, out, _ = run(capsys, "verify", "bivectors", "-n", "2", "--geometry", "conformal:2,0")
    assert code == 0
    assert "lambda-invariant: pass" in out.splitlines()
    assert "schouten-nonzero: pass" in out.splitlines()


def test_verify_operators(capsys):
    code, out, _ = run(capsys, "verify", "operators", "-n", "1")
    assert code == 0
    assert "R0 = E(E-1): pass" in out.splitlines()


def test_verify_star_json_is_deterministic(capsys):
    argv = ["verify", "star", "-n", "1", "--max-deg", "3", "--seed", "7", "--format", "json", "--cases", "30"]
    code, out, _ = run(capsys, *argv)
    _, again, _ = run(capsys, *argv)
    assert code == 0 and out == again
    data = json.loads(out)
    assert data["schema"] == 1 and data["seed"] == 7 and data["suite"] == "star"
    names = [c["name"] for c in data["checks"]]
    assert "route-equivalence" in names and names == sorted(names)
    assert all(c["status"] == "pass" for c in data["checks"])


def test_verify_failure_exit(capsys, monkeypatch):
    from starq import verify

    def broken(cfg, rng):
        return [("always-fails", "deliberately broken", lambda: {"detail": "x"})]

    monkeypatch.setitem(verify._BUILDERS, "algebra", broken)
    code, out, _ = run(capsys, "verify", "algebra", "--format", "json")
    assert code == 1
    check = json.loads(out)["checks"][0]
    assert check["status"] == "fail" and check["witness"] == {"detail": "x"}


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "starq.cli", "star", "-n", "1", "xi1", "x1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "x1*xi1 + 1/2*h\n"
