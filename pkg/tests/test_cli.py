import csv
import json
import math
import subprocess
import sys

import pytest

from qrecurrence.cli import main
from qrecurrence.io import certificate_from_dict, load_spectrum
from qrecurrence.recurrence import verify_certificate


@pytest.fixture
def spectra(tmp_path):
    files = {
        "qubit": {"mode": "continuous", "values": [0, 1]},
        "three": {"mode": "continuous", "values": [0, math.sqrt(2), math.e]},
        "single": {"mode": "continuous", "values": [4.0]},
        "walk": {"mode": "discrete", "values": [0, 2 * math.pi * (math.sqrt(2) - 1), math.pi]},
    }
    out = {}
    for name, doc in files.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        out[name] = str(p)
    return out


def rows(text):
    return list(csv.reader(line for line in text.splitlines() if not line.startswith("#")))


def test_bounds_table(capsys):
    assert main(["bounds", "--d", "3", "--epsilon", "0.1", "--span", "1"]) == 0
    table = rows(capsys.readouterr().out)
    assert [r[0] for r in table[1:]] == ["T1", "T3a", "T3b"]
    assert all(r[3] == "32" for r in table[1:])


def test_bounds_two_levels_exact_rendering(capsys):
    assert main(["bounds", "--d", "2", "--epsilon", "0.5", "--span", "1"]) == 0
    table = rows(capsys.readouterr().out)
    assert table[1][:2] == ["T1", "6.283185307179586"]


def test_bounds_discrete_eps_rejected(capsys):
    assert main(["bounds", "--mode", "discrete", "--d", "2", "--epsilon", "0.6", "--max-r", "3"]) == 2
    assert "T2 and T4" in capsys.readouterr().err


def test_recur_qubit(spectra, tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["recur", spectra["qubit"], "--epsilon", "0.3", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["certificate"]["multiplier"] == 1
    assert doc["verification"] == {"ok": True, "violations": []}
    assert doc["meta"]["version"] and doc["meta"]["precision"] == "float" and "seed" in doc["meta"]
    cert = certificate_from_dict(doc["certificate"])
    assert verify_certificate(cert, load_spectrum(spectra["qubit"]))[0]
    assert "verified: True" in capsys.readouterr().err


@pytest.mark.parametrize("method", ["hypercube", "two-cube", "simplex-hull", "all"])
def test_recur_three_levels(spectra, capsys, method):
    assert main(["recur", spectra["three"], "--epsilon", "0.1", "--method", method]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verification"]["ok"]


def test_recur_discrete(spectra, capsys):
    assert main(["recur", spectra["walk"], "--epsilon", "0.4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert isinstance(doc["certificate"]["recurrence_time"], int)


def test_recur_errors(spectra, capsys):
    assert main(["recur", spectra["single"], "--epsilon", "0.1"]) == 2
    assert main(["recur", "/nonexistent/spectrum.json", "--epsilon", "0.1"]) == 4
    assert main(["recur", spectra["qubit"], "--epsilon", "0.1", "--mode", "discrete"]) == 2


def test_approx_flags(capsys):
    argv = ["approx", "--alphas", "0", str(math.sqrt(2)), "1", "--N", "5",
            "--integer-pair", "2", "0", "--method", "simplex-hull", "--oracle"]
    assert main(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    a = doc["approximation"]
    assert a["q"] <= 6 and a["reduced"]
    assert doc["oracle"]["brute_min_q"] <= a["q"]


def test_approx_file_and_rational_precision(tmp_path, capsys):
    p = tmp_path / "req.json"
    p.write_text(json.dumps({"rational_alphas": [[0, 1], [3, 10], [7, 10]], "N": 4, "method": "hypercube"}))
    assert main(["approx", str(p)]) == 0
    a = json.loads(capsys.readouterr().out)["approximation"]
    assert a["method"] == "hypercube" and a["q"] <= 64
    assert main(["approx", "--alphas", "0", "0.3", "2/3", "--N", "3", "--precision", "rational"]) == 0
    assert json.loads(capsys.readouterr().out)["meta"]["precision"] == "rational"


def test_approx_missing_inputs(capsys):
    assert main(["approx", "--N", "3"]) == 2
    assert main(["approx", "--alphas", "0", "0.5", "1.5", "--N", "3", "--integer-pair", "1", "0"]) == 2


def test_scan(spectra, tmp_path):
    out, summary = tmp_path / "scan.csv", tmp_path / "scan.json"
    argv = ["scan", spectra["qubit"], "--epsilon", "0.1", "--t-step", "0.01", "--t-max", "10",
            "--out", str(out), "--summary", str(summary)]
    assert main(argv) == 0
    s = json.loads(summary.read_text())["summary"]
    assert abs(s["first_recurrence"] - 2 * math.pi) < 0.21
    table = rows(out.read_text())
    assert table[0] == ["time", "worst_case"] and len(table) == 1002


def test_volume(capsys):
    assert main(["volume", "--d", "3", "--N", "1", "--samples", "1000000", "--seed", "42"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["estimate"] - 0.75) <= 3 * doc["std_error"]
    assert doc["meta"]["seed"] == 42 and doc["exact"] == [3, 4]


def test_tiles(capsys):
    assert main(["tiles", "--d", "4", "--N", "2", "--samples", "5000", "--seed", "3"]) == 0
    table = rows(capsys.readouterr().out)
    assert all(r[2] == r[3] for r in table[1:])


def test_outputs_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["volume", "--d", "4", "--N", "2", "--samples", "20000", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_text() == b.read_text()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qrecurrence", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "qrecurrence" in r.stdout
