import csv
import json
import subprocess
import sys

import pytest

from convpow.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_o3(capsys):
    code, out, _ = run(capsys, "analyze", "--scheme", "o3", "--lambda", "0.5", "--order", "3")
    assert code == 0
    rep = json.loads(out)
    pt = rep["points"][0]
    assert rep["K"] == 1 and pt["mu"] == 2
    assert pt["alpha"] == pytest.approx(0.5)
    p2 = pt["polynomials"][2]["terms"]
    assert any(t["deg"] == 6 and t["re"] == pytest.approx(-1 / 512) for t in p2)


def test_analyze_gating(capsys, tmp_path):
    shift = tmp_path / "shift.json"
    shift.write_text(json.dumps({"offset": 1, "coeffs": [[1, 0]]}))
    code, out, err = run(capsys, "analyze", "--scheme", "file", "--file", str(shift))
    assert code == 2 and json.loads(err)["error"] == "ALL_MODULUS_ONE"
    assert json.loads(out)["alternative"] == "ALL_MODULUS_ONE"

    double = tmp_path / "double.json"
    double.write_text(json.dumps({"offset": -1, "coeffs": [[-0.125, 0], [1.125, 0], [1.125, 0], [-0.125, 0]]}))
    code, _, err = run(capsys, "analyze", "--scheme", "file", "--file", str(double))
    assert code == 2 and json.loads(err)["factor"] == pytest.approx(0.5, abs=1e-10)
    code, out, _ = run(capsys, "analyze", "--scheme", "file", "--file", str(double), "--normalize")
    assert code == 0 and json.loads(out)["points"][0]["mu"] == 2


def test_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"offset": 0, "coeffs": [[NaN, 0]]}')
    code, _, err = run(capsys, "analyze", "--scheme", "file", "--file", str(bad))
    assert code == 1 and json.loads(err)["error"] == "ParseError"
    code, _, err = run(capsys, "analyze", "--scheme", "o3", "--lambda", "1.5")
    assert code == 1
    code, _, _ = run(capsys, "expand", "-n", "0")
    assert code == 1


def test_expand_writes_files(capsys, tmp_path):
    prefix = tmp_path / "run"
    code, out, _ = run(capsys, "expand", "--scheme", "o3", "-M", "3", "-n", "50", "--out", str(prefix),
                       "--attractor-profile", "--envelope-ns", "100")
    assert code == 0
    summary = json.loads(out)
    assert summary == json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["envelope_check"]["pass"]
    with open(tmp_path / "run_profile.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == summary["window"][1] - summary["window"][0] + 1
    assert (tmp_path / "run_attractor0.csv").exists()


def test_convolve(capsys, tmp_path):
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"offset": 0, "coeffs": [[0.5, 0], [0.5, 0]]}))
    code, out, _ = run(capsys, "convolve", "--file", str(f), "--file", str(f))
    assert code == 0 and json.loads(out)["coeffs"] == [[0.25, 0.0], [0.5, 0.0], [0.25, 0.0]]
    code, out, _ = run(capsys, "convolve", "--file", str(f), "--power", "3")
    assert json.loads(out)["coeffs"][1] == [0.375, 0.0]
    code, _, _ = run(capsys, "convolve", "--file", str(f), "--power", "0")
    assert code == 1


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "polynomial-routes")
    assert code == 0 and json.loads(out)["pass"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "convpow", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "analyze" in proc.stdout
