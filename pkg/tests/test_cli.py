import csv
import io
import json
import math

import numpy as np
import pytest

from schatten_iso.cli import run
from schatten_iso.linalg import load_matrix, save_matrix

X = np.array([[0.0, 1.0], [1.0, 0.0]])
FAST = ["--restarts", "3", "--max-evals", "300", "--screen", "1000", "--polish", "1"]


@pytest.fixture
def mats(tmp_path):
    paths = {}
    for name, M in {"a": np.diag([1.0, -1.0]), "b": X, "a0": np.diag([0.0, 1.0]),
                    "ap": np.diag([2.0, 0.7]), "bp": np.array([[0.3, 1.0], [1.0, -0.4]]),
                    "ua": np.diag([1.0, 0.0]), "ub": np.diag([0.0, 1.0])}.items():
        paths[name] = str(tmp_path / f"{name}.json")
        save_matrix(paths[name], M)
    return paths


def lines(text):
    return text.strip().splitlines()


def test_norm(mats, capsys):
    assert run(["norm", "--matrix", mats["a"], "--p", "0.5"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(4.0)
    assert run(["norm", "--matrix", mats["a"], "--p", "inf"]) == 0
    assert float(capsys.readouterr().out) == 1.0


def test_derive_columns(mats, capsys):
    assert run(["derive", "--a", mats["ap"], "--b", mats["bp"], "--order", "2", "--p", "0.5"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0]) == ["order", "closed_form", "finite_difference", "abs_err", "rel_err"]
    assert float(rows[0]["closed_form"]) < 0 and float(rows[0]["rel_err"]) <= 1e-4
    assert run(["derive", "--a", mats["ap"], "--b", mats["bp"], "--order", "1", "--kind", "trace",
                "--symbol", "power:3"]) == 0
    row = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))[0]
    A, B = np.diag([2.0, 0.7]), np.array([[0.3, 1.0], [1.0, -0.4]])
    assert float(row["closed_form"]) == pytest.approx(3 * np.trace(A @ A @ B))


def test_moi_writes_matrix(mats, tmp_path):
    out = tmp_path / "t.json"
    assert run(["moi", "--a", mats["ap"], "--b", mats["bp"], "--symbol", "power:2", "--out", str(out)]) == 0
    A, B = np.diag([2.0, 0.7]), np.array([[0.3, 1.0], [1.0, -0.4]])
    assert np.allclose(load_matrix(out), A @ B + B @ A)


def test_matrix_round_trip_bitwise(tmp_path, mats):
    out = tmp_path / "t.json"
    run(["moi", "--a", mats["ap"], "--b", mats["bp"], "--symbol", "abs-power:0.5", "--out", str(out)])
    M = load_matrix(out)
    save_matrix(tmp_path / "again.json", M)
    assert np.array_equal(load_matrix(tmp_path / "again.json"), M)
    assert (tmp_path / "again.json").read_text() == out.read_text()


def test_branches_csv(mats, tmp_path):
    out = tmp_path / "br.csv"
    argv = ["branches", "--a", mats["a"], "--b", mats["b"], "--center", "0", "--half-width", "0.05",
            "--points", "41", "--out", str(out)]
    assert run(argv) == 0
    text = out.read_text()
    rows = lines(text)
    assert rows[0].startswith("n=2,t_center=0,half_width=")
    assert rows[1] == "t,branch_0,branch_1" and len(rows) == 43
    t, b0, b1 = map(float, rows[2].split(","))
    assert b1 == pytest.approx(math.sqrt(1 + t * t), abs=1e-12)
    assert run(argv) == 0 and out.read_text() == text


def test_multiplicity_from_csv(mats, tmp_path, capsys):
    out = tmp_path / "br.csv"
    run(["branches", "--a", mats["a0"], "--b", mats["b"], "--out", str(out)])
    assert run(["multiplicity", "--branches", str(out), "--q", "0.6", "--p", "0.3"]) == 0
    text = capsys.readouterr().out
    row = lines(text)[1].split(",")
    assert row[:2] == ["0", "2"] and float(row[2]) == pytest.approx(-1.0, abs=1e-2)
    assert "exponent_0,1," in text


def test_verify_iqp(mats, tmp_path):
    out = tmp_path / "r.json"
    assert run(["verify-iqp", "--a", mats["ua"], "--b", mats["ub"], "--q", "0.4", "--p", "0.4",
                "--out", str(out)]) == 0
    assert json.loads(out.read_text())["max_residual"] <= 1e-14


def test_falsify_end_to_end(tmp_path):
    out, sweep = tmp_path / "run.json", tmp_path / "run.csv"
    argv = ["falsify", "--q", "0.5", "--p", "0.25", "--n", "2", "--seed", "7", *FAST,
            "--out", str(out), "--csv", str(sweep)]
    assert run(argv) == 0
    rep = json.loads(out.read_text())
    assert rep["floor"] > 0 and rep["q"] == 0.5 and "best_instance" in rep and rep["per_t"]
    first = sweep.read_bytes()
    assert lines(first.decode())[1].startswith("0.5,0.25,2,7,")
    assert run(argv) == 0 and sweep.read_bytes() == first


def test_falsify_commutative(tmp_path, capsys):
    assert run(["falsify-commutative", "--q", "2", "--p", "0.5", "--n", "2", "--complex", *FAST]) == 0
    assert "floor" in json.loads(capsys.readouterr().out)


def test_budget_exit_code(tmp_path, capsys):
    out = tmp_path / "partial.json"
    code = run(["falsify", "--q", "0.5", "--p", "0.25", *FAST, "--total-evals", "1200", "--out", str(out)])
    assert code == 4
    assert json.loads(out.read_text())["budget_exhausted"] is True
    assert len(lines(capsys.readouterr().err)) == 1


def test_probe(capsys):
    for family, expected in (("abs", "0"), ("tabs", "1"), ("gap", "0")):
        assert run(["probe", "--family", family]) == 0
        assert capsys.readouterr().out.strip() == expected


def test_report_merges(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("q,p,n,seed,floor\n1.5,0.5,2,7,0.1\n")
    b.write_text("q,p,n,seed,floor\n0.5,0.25,2,7,0.2\n1.5,0.5,2,7,0.1\n")
    assert run(["report", str(a), str(b)]) == 0
    assert lines(capsys.readouterr().out) == ["q,p,n,seed,floor", "0.5,0.25,2,7,0.2", "1.5,0.5,2,7,0.1"]


def test_output_directory_from_environment(tmp_path, monkeypatch, mats):
    monkeypatch.setenv("SCHATTEN_ISO_OUT", str(tmp_path / "outdir"))
    assert run(["branches", "--a", mats["a"], "--b", mats["b"], "--out", "br.csv"]) == 0
    assert (tmp_path / "outdir" / "br.csv").exists()


@pytest.mark.parametrize("argv", [
    [],
    ["norm"],
    ["frobnicate"],
    ["norm", "--matrix", "missing.json", "--p", "1"],
    ["falsify", "--q", "0.5", "--p", "1.5"],
    ["falsify", "--q", "0.5", "--p", "0.25", "--seed", "-1"],
    ["moi", "--a", "x", "--b", "y", "--symbol", "bogus"],
])
def test_usage_errors(argv, capsys, mats):
    argv = [mats.get(a, a) for a in argv]
    if argv[:1] == ["moi"]:
        argv[2], argv[4] = mats["a"], mats["b"]
    assert run(argv) == 2
    assert capsys.readouterr().err.strip()


def test_numeric_failure_exit_code(mats, capsys):
    assert run(["derive", "--a", mats["a0"], "--b", mats["b"], "--order", "1", "--p", "0.5"]) == 3
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "SingularOperand" in err[0]


def test_module_entry_point(mats):
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "schatten_iso", "norm", "--matrix", mats["a"], "--p", "1"],
                         capture_output=True, text=True, check=True)
    assert float(out.stdout) == 2.0
