from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from definetti.cli import main
from definetti.entropy import QuantumChannel
from definetti.linalg import matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_single_row(capsys):
    code, out, _ = run(capsys, "bound", "--n", "20", "--k", "5", "--r", "3")
    data = json.loads(out)
    assert code == 0
    assert len(data["rows"]) == 1
    row = data["rows"][0]
    assert row["N"] == 25 and np.isclose(row["epsilon"], 33.69967231, rtol=1e-8)
    assert "tolerances" in data["config"]


def test_bound_alpha_rows(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "0.75", "--N", "100", "--N-max", "104",
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "N,n,k,r,d,epsilon,main_text_epsilon"
    assert len(lines) == 6
    n_vals = [int(line.split(",")[1]) for line in lines[1:]]
    assert n_vals[0] == 100 - round(100**0.75)


def test_bound_grid(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([{"n": 4, "k": 2, "r": 1}, {"N": 30, "n": 20, "r": 5, "d": 3}]))
    code, out, _ = run(capsys, "bound", "--grid", str(grid))
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["k"] for r in rows] == [2, 10]


@pytest.mark.parametrize("argv", [["bound"], ["bound", "--n", "2"], ["nope"], ["verify", "--n", "2"],
                                  ["verify", "--state", "cat", "--state-file", "x", "--n", "2",
                                   "--k", "1", "--r", "1"],
                                  ["bound", "--n", "2", "--k", "1", "--r", "5"]])
def test_usage_errors(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_missing_file_is_io_error(capsys):
    code, _, err = run(capsys, "purify", "--state-file", "/nonexistent/state.json")
    assert code == 1 and "error" in err


def test_verify_cat(capsys):
    code, out, _ = run(capsys, "verify", "--state", "cat", "--n", "3", "--k", "1", "--r", "1",
                       "--resolution", "200")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["config"]["quadrature"]["resolution"] == 200


def test_verify_inconclusive_exit_code(capsys):
    # four nodes cannot resolve the integral
    code, out, _ = run(capsys, "verify", "--state", "cat", "--n", "3", "--k", "2", "--r", "1",
                       "--resolution", "4")
    rep = json.loads(out)
    assert rep["status"] == "inconclusive"
    assert code == 3


def test_verify_state_file(tmp_path, capsys):
    v = np.zeros(8)
    v[[0, 7]] = 1 / np.sqrt(2)
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(matrix_to_json(np.outer(v, v))))
    code, out, _ = run(capsys, "verify", "--state-file", str(path), "--n", "2", "--k", "1",
                       "--r", "1", "--resolution", "100", "--format", "text")
    assert code == 0
    assert "status" in out and "pass" in out


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--state", "Ex1", "--n", "2", "--k", "2", "--r", "1", "--resolution", "100"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"quadrature": {"resolution": 50, "seed": 7}}))
    code, out, _ = run(capsys, "verify", "--state", "cat", "--n", "2", "--k", "1", "--r", "1",
                       "--config", str(cfg))
    rep = json.loads(out)
    assert rep["config"]["quadrature"] == {"kind": "auto", "resolution": 50, "seed": 7}
    assert rep["provenance"]["seed"] == 7


def test_catalog_single(capsys):
    code, out, _ = run(capsys, "catalog", "Ex4", "--format", "csv", "--starts", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "id,N,n,check,claim,value,status"
    assert all(line.endswith("pass") for line in lines[1:])


def test_twirl_check(capsys):
    code, out, _ = run(capsys, "twirl-check", "--n", "2", "--d", "3", "--trials", "3")
    data = json.loads(out)
    assert code == 0 and data["pass"] and data["max_residual"] < 1e-8


def test_purify_to_file(tmp_path, capsys):
    dest = tmp_path / "psi.json"
    code, out, _ = run(capsys, "purify", "--state", "mixed", "--N", "2", "--out", str(dest))
    data = json.loads(out)
    assert code == 0 and data["pass"] and data["effective_d"] == 4
    vec = json.loads(dest.read_text())
    assert vec["rows"] == 16 and vec["cols"] == 1


def test_entropy_and_extensivity_csv(tmp_path, capsys):
    code, out, _ = run(capsys, "entropy", "--family", "Ex2", "--N", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "N,value,floor,slack,pass"
    ch = tmp_path / "ch.json"
    ch.write_text(json.dumps(QuantumChannel.dephasing().to_json()))
    code, out, _ = run(capsys, "extensivity", "--channel", str(ch), "--family", "cat", "--N", "4",
                       "--format", "csv")
    rows = out.strip().splitlines()[1:]
    assert code == 0 and len(rows) == 3
    assert all(r.endswith("pass") for r in rows)


def test_gentle_check(capsys):
    code, out, _ = run(capsys, "gentle-check", "--trials", "20", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["violations"] == 0


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "definetti.cli", "bound", "--n", "4", "--k", "2",
                           "--r", "1", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].split()[:3] == ["N", "n", "k"]
