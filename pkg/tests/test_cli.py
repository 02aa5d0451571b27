import json
import subprocess
import sys

import pytest

from lineband.cli import main
from lineband.geometry import save_config
from lineband.witnesses import a4_configuration


@pytest.fixture
def a4_file(tmp_path):
    path = tmp_path / "a4.json"
    save_config(a4_configuration(), path)
    return path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    report = json.loads(out) if out.strip() else None
    return code, report, err


def strip_timing(report):
    report = json.loads(json.dumps(report))
    report.pop("timing", None)
    report.get("results", {}).pop("wall_ms", None)
    return report


def test_feasible_c5_certified(capsys):
    code, rep, _ = run(capsys, "feasible", "--graph", "C5", "--R", "1", "--mode", "certified")
    assert code == 1
    assert rep["results"]["status"] == "infeasible"
    assert rep["results"]["advisory"] is False


def test_feasible_ok(capsys, tmp_path):
    svg = tmp_path / "w.svg"
    code, rep, _ = run(capsys, "feasible", "--graph", "A4", "--R", "3+2*s@2", "--mode", "fast")
    assert code == 1 and rep["results"]["advisory"] is True
    code, rep, _ = run(capsys, "feasible", "--graph", "A4", "--R", "5.5", "--svg", str(svg))
    assert code == 0
    assert rep["results"]["R"] == "11/2"
    assert svg.read_text().startswith("<?xml")


def test_rmax_a4(capsys):
    code, rep, _ = run(capsys, "rmax", "--graph", "A4", "--tol", "1e-6", "--rcap", "100")
    assert code == 0
    res = rep["results"]
    assert res["lo"] < 5.828427 < res["hi"]
    assert res["status"] == "Bracketed"


def test_verify_boundary(capsys, a4_file):
    code, rep, _ = run(
        capsys, "verify", "--config", str(a4_file), "--graph", "A4", "--rin", "1", "--rout", "3+2*s@2", "--region", "band"
    )
    assert code == 1
    assert len(rep["results"]["violations"]) == 3
    assert len(rep["inputs"]["config_sha256"]) == 64
    code, rep, _ = run(capsys, "verify", "--config", str(a4_file), "--graph", "A4", "--rout", "5.8")
    assert code == 0 and rep["results"]["ok"]


def test_flatten_roundtrip(capsys, a4_file, tmp_path):
    out = tmp_path / "flat.json"
    code, rep, _ = run(
        capsys, "flatten", "--config", str(a4_file), "--graph", "A4", "--R", "29/10+2*s@2", "--eps", "1/100", "--out", str(out)
    )
    assert code == 0
    r_out = rep["results"]["ball_r_out"]
    code, rep, _ = run(
        capsys, "verify", "--config", str(out), "--graph", "A4", "--rout", f"{r_out}@2", "--region", "ball"
    )
    assert code == 0


def test_flatten_rejects_infeasible_input(capsys, a4_file):
    code, rep, err = run(capsys, "flatten", "--config", str(a4_file), "--graph", "A4", "--R", "6")
    assert code == 2 and rep is None and "not band-feasible" in err


def test_complex_g6(capsys, tmp_path):
    svg = tmp_path / "g6.svg"
    code, rep, _ = run(capsys, "complex-g6", "--svg", str(svg))
    assert code == 0
    assert rep["results"]["matches"] is True
    assert len(rep["results"]["sorted_norms"]) == 15
    assert svg.exists()


def test_menelaus(capsys):
    code, rep, _ = run(capsys, "menelaus", "--count", "300", "--seed", "7")
    assert code == 0
    assert rep["results"]["product_failures"] == [] and rep["results"]["odd_crossings"] == []


def test_an_sweep_small_and_refusal(capsys):
    code, rep, _ = run(capsys, "an-sweep", "--max-n", "3", "--tol", "1e-2")
    assert code == 0 and [r["n"] for r in rep["results"]["rows"]] == [2, 3]
    code, rep, err = run(capsys, "an-sweep", "--max-n", "6", "--mode", "certified")
    assert code == 2 and "capped" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["feasible", "--graph", "A4", "--R", "3+x"],
        ["feasible", "--graph", "A4", "--R", "2", "--frobnicate"],
        ["feasible", "--graph", "n=2;edges=1-1", "--R", "2"],
        ["feasible", "--graph", "A7", "--R", "2"],
        ["feasible", "--graph", "A4", "--R", "1/2"],
        ["verify", "--config", "/nonexistent.json", "--graph", "A4", "--rout", "2"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, rep, _ = run(capsys, *argv)
    assert code == 2 and rep is None


def test_size_mismatch(capsys, a4_file):
    code, _, err = run(capsys, "verify", "--config", str(a4_file), "--graph", "A3", "--rout", "2")
    assert code == 2 and "lines" in err


def test_report_reproducible(capsys, a4_file):
    argv = ["feasible", "--graph", "A4", "--R", "5"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert strip_timing(a) == strip_timing(b)
    assert a["command"] == ["lineband"] + argv


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lineband.cli", "menelaus", "--count", "20"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["count"] == 20
