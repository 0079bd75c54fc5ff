import json
import os
import subprocess
import sys

import pytest

from locpower.cli import main

FIX = os.path.join(os.path.dirname(__file__), "fixtures")
SYM3 = os.path.join(FIX, "sym3.toml")
TINY = os.path.join(FIX, "tiny.toml")
RADAR = os.path.join(FIX, "radar.toml")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_prints_total_power(capsys):
    code, out, _ = _run(capsys, "solve", "--net", SYM3)
    assert code == 0
    assert "total power 4.000000" in out
    xs = [float(t) for t in next(ln for ln in out.splitlines() if ln.startswith("x ")).split()[1:]]
    assert sum(xs) == pytest.approx(4.0, abs=1e-6)


def test_mode_flag_equivalent(capsys):
    a = _run(capsys, "solve", "--net", SYM3)
    b = _run(capsys, "--mode", "solve", "--net", SYM3)
    assert a == b


def test_validate_uniform(capsys):
    code, out, _ = _run(capsys, "validate", "--net", SYM3, "--x", "uniform", "--format", "json")
    assert code == 0
    res = json.loads(out)
    assert all(s <= r * (1 + 1e-9) for s, r in zip(res["speb"], res["requirement"]))
    assert res["satisfied"] == [True]


def test_validate_unmet_requirement(capsys):
    code, out, _ = _run(capsys, "validate", "--net", SYM3, "--x", "0.1,0.1,0.1")
    assert code == 2
    assert "satisfied False" in out


def test_robust_solve_infeasible_with_caps(capsys):
    code, out, _ = _run(capsys, "robust-solve", "--net", SYM3, "--nuss", "0.3", "--requirement", "0.0001",
                        "--caps", TINY)
    assert code == 2
    assert "primal_infeasible" in out


def test_json_contains_kkt_and_round_trips(capsys):
    code, out, _ = _run(capsys, "solve", "--net", SYM3, "--format", "json")
    res = json.loads(out)
    assert code == 0 and res["kkt"]["ok"] is True
    for key in ("primal_residual", "dual_residual", "complementarity", "max_violation"):
        assert res["kkt"][key] <= 1e-7
    # full double precision: the printed value re-parses to the same float
    assert json.loads(json.dumps(res["x"])) == res["x"]
    assert repr(res["x"][0]) in out


def test_robust_solve_variants(capsys):
    totals = {}
    for variant in ("lower", "upper", "efficient"):
        code, out, _ = _run(capsys, "robust-solve", "--net", SYM3, "--nuss", "0.1", "--variant", variant,
                            "--M", "32", "--format", "json")
        assert code == 0
        res = json.loads(out)
        totals[variant] = res["total_power"]
        assert res["kkt"]["ok"]
    assert totals["lower"] <= totals["upper"] * (1 + 1e-7) <= totals["efficient"] * (1 + 1e-6)


def test_minmax_and_radar(capsys):
    code, out, _ = _run(capsys, "minmax", "--net", SYM3, "--ptot", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["accuracy"] == pytest.approx(1.0, rel=1e-6)
    code, out, _ = _run(capsys, "solve", "--net", RADAR, "--format", "json")
    assert code == 0 and json.loads(out)["kkt"]["ok"]


def test_oracle_mode(capsys):
    code, out, _ = _run(capsys, "oracle", "--net", SYM3, "--nuss", "0.1", "--x", "optimal", "--format", "json")
    assert code == 0
    res = json.loads(out)
    assert res["lower"][0] <= res["worst_case_speb"][0] * (1 + 1e-9) <= res["upper"][0] * (1 + 1e-9)


def test_sweep_csv_output(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _, _ = _run(capsys, "sweep", "--trials", "2", "--n-tx", "5", "--seed", "3", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2


@pytest.mark.parametrize("argv, fragment", [
    (["solve"], "needs --net"),
    (["--bogus"], "unrecognized arguments"),
    ([], "a mode is required"),
    (["robust-solve", "--net", SYM3, "--variant", "upper", "--M", "1", "--nuss", "0.1"], "--M must be at least 2"),
    (["minmax", "--net", SYM3], "needs --ptot"),
])
def test_usage_errors(capsys, argv, fragment):
    code, _, err = _run(capsys, *argv)
    assert code == 1
    assert fragment in err


def test_config_errors(tmp_path, capsys):
    code, _, err = _run(capsys, "solve", "--net", str(tmp_path / "missing.toml"))
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.toml"
    bad.write_text("[anchors\npositions = 1")
    code, _, err = _run(capsys, "solve", "--net", str(bad))
    assert code == 1 and "malformed config" in err
    partial = tmp_path / "partial.toml"
    partial.write_text("[anchors]\npositions = [[0.0, 1.0]]\n[channel]\nrc = [[1.0]]\n")
    code, _, err = _run(capsys, "solve", "--net", str(partial))
    assert code == 1 and "missing 'positions' in section [agents]" in err
    code, _, err = _run(capsys, "robust-solve", "--net", SYM3)
    assert code == 1 and "--nuss" in err


def test_identical_bytes_across_processes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.json"
        r = subprocess.run([sys.executable, "-m", "locpower", "robust-solve", "--net", SYM3, "--nuss", "0.2",
                            "--format", "json", "--out", str(path)], capture_output=True)
        assert r.returncode == 0, r.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
