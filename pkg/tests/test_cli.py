import json
import subprocess
import sys

import pytest

from menger.cli import main
from menger.contraction import check_mk_c, map_from_json
from menger.espace import ESpaceInstance, espace_to_pm
from menger.pmspace import check_menger
from menger.tnorm import TNorm


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_halving_demo(capsys):
    code, out, _ = run(capsys, "solve")
    summary = json.loads(out)
    assert code == 0
    assert summary["outcome"] == "converged" and summary["iters"] <= 25


def test_solve_csv_trace(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "solve", "--format", "csv", "--output", str(path))
    rows = path.read_text().splitlines()
    assert code == 0 and rows[0] == "iter,point_id,step_dist"
    assert len(rows) - 1 == json.loads(out)["iters"]


def test_density_of_multiples_of_three(capsys):
    code, out, _ = run(capsys, "density", "--set", '{"periodic": {"p": 3, "residues": [0]}}')
    assert code == 0 and json.loads(out)["density"] == "1/3"
    code, out, _ = run(capsys, "density", "--format", "csv", "--set", '{"periodic": {"p": 3, "residues": [0]}}')
    assert out.strip() == "1/3"


def test_check_space_one_point(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"points": ["a"], "ddfs": {}}))
    code, out, _ = run(capsys, "check-space", "--input", str(path))
    assert code == 0
    assert json.loads(out)["violations"] == []


def test_gen_is_deterministic_and_certified(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["gen", "contraction-fixture", "--seed", "7", "--m", "2", "--k", "0.5", "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    obj = json.loads(a.read_text())
    inst = ESpaceInstance.from_json(obj["instance"])
    assert check_mk_c(inst, map_from_json(obj["map"]), 2, 0.5).ok
    code, _, _ = run(capsys, "check-contraction", "--input", str(a), "--kind", "c", "--m", "2")
    assert code == 0


def test_gen_espace_example_passes_min(capsys):
    code, out, _ = run(capsys, "gen", "espace", "--seed", "1", "--points", "4", "--outcomes", "3")
    assert code == 0
    inst = ESpaceInstance.from_json(json.loads(out))
    assert check_menger(espace_to_pm(inst), TNorm.M).ok


def test_sibley_and_tau(capsys):
    pair = json.dumps({"F": {"breakpoints": [0.2], "values": [1]}, "G": {"breakpoints": [0.5], "values": [1]}})
    code, out, _ = run(capsys, "sibley", "--input", pair)
    assert code == 0 and json.loads(out)["distance"] == pytest.approx(0.3, abs=1e-9)
    code, out, _ = run(capsys, "tau", "--input", pair, "--tnorm", "W")
    assert json.loads(out)["result"] == {"breakpoints": [0.7], "values": [1.0]}


def test_pn_check(capsys, tmp_path):
    path = tmp_path / "pn.json"
    path.write_text(json.dumps({"probs": [0.5, 0.5], "dim": 1, "vectors": [[1, 3], [0, 0]], "map": [[0.5]]}))
    code, out, _ = run(capsys, "pn-check", "--input", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["fixed_points"]["fixed"] == [1]


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize("argv, field", [
    (["solve", "--k", "2"], "--k"),
    (["solve", "--m", "0"], "--m"),
    (["solve", "--tol", "0"], "--tol"),
    (["gen", "espace"], "--seed"),
])
def test_usage_errors_name_the_field(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == 2 and field in err


def test_malformed_json_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "points": [1, 2,\n}')
    code, _, err = run(capsys, "check-space", "--input", str(path))
    assert code == 2 and "line 3, column 1" in err


def test_violation_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "points": ["p", "q", "r"],
        "ddfs": {
            "p|q": {"breakpoints": [1, 2], "values": [0.5, 1]},
            "r|q": {"breakpoints": [1], "values": [1]},
            "p|r": {"breakpoints": [2, 3], "values": [0.25, 1]},
        },
    }))
    code, out, _ = run(capsys, "check-space", "--input", str(path))
    assert code == 1 and json.loads(out)["violations"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "menger", "density", "--set", '{"members": [0, 2, 4], "n": 6}'],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["density"] == "1/2"
