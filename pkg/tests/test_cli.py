import csv
import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from ep_lab.cli import format_number, main
from ep_lab.sweep import COLUMNS

HEADER = "a,E1,E2,G1_half,G2_half,b11sq,b12sq,b21sq,b22sq,r1_abs,r2_abs,Z_abs,defect,e1_bare,e2_bare"


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_format_number():
    assert format_number(-0.0) == "0.00000000000e+00"
    assert format_number(2 / 3) == "6.66666666667e-01"
    assert len(format_number(1.0).split("e")[0].replace(".", "")) == 12


def test_sweep_writes_files(tmp_path):
    out = tmp_path / "new" / "dir"
    assert main(["sweep", "--preset", "fig2_left", "-o", str(out)]) == 0
    text = (out / "sweep.csv").read_bytes()
    assert text.split(b"\n")[0].decode() == HEADER == ",".join(COLUMNS)
    assert b"\r" not in text and text.endswith(b"\n")
    rows = read_rows(out / "sweep.csv")
    assert len(rows) == 601
    row = min(rows, key=lambda r: abs(float(r["a"]) - 0.06))
    assert abs(float(row["G1_half"])) < 1e-10
    assert {r["defect"] for r in rows} == {"0", "1"}
    root = ET.parse(out / "plot.svg").getroot()
    assert root.tag.endswith("svg")
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "sweep"
    assert set(manifest["outputs"]) == {"sweep.csv", "plot.svg"}
    assert {"config", "version", "timestamp"} <= set(manifest)


def test_fig1_left_defect_on_a_grid_through_two_thirds(tmp_path):
    cfg = json.loads(json.dumps({**_preset_dict("fig1_left"), "a_grid": [0, 4 / 3, 601]}))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["sweep", "--config", str(path), "-o", str(tmp_path / "o")]) == 0
    rows = read_rows(tmp_path / "o" / "sweep.csv")
    flagged = [float(r["a"]) for r in rows if r["defect"] == "1"]
    assert flagged == [pytest.approx(2 / 3, abs=1e-11)]


def _preset_dict(name):
    from ep_lab.scenario import preset

    return preset(name).to_dict()


def test_manifest_round_trip_reproduces_csv(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--preset", "fig1_right", "--grid", "101", "-o", str(a)]) == 0
    assert main(["sweep", "--config", str(a / "manifest.json"), "-o", str(b)]) == 0
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()
    assert len(read_rows(b / "sweep.csv")) == 101


def test_preset_wins_over_config(tmp_path, caplog):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(_preset_dict("fig2_right")))
    with caplog.at_level("WARNING"):
        assert main(["sweep", "--preset", "fig2_left", "--config", str(path), "-o", str(tmp_path)]) == 0
    assert "using preset fig2_left" in caplog.text
    assert json.loads((tmp_path / "manifest.json").read_text())["config"]["name"] == "fig2_left"


def test_gnuplot_output(tmp_path):
    assert main(["sweep", "--preset", "fig1_left", "--grid", "11", "--gnuplot", "-o", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.dat").exists() and (tmp_path / "sweep.gp").exists()
    assert not (tmp_path / "plot.svg").exists()
    assert "sweep.dat" in (tmp_path / "sweep.gp").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep"],
        ["sweep", "--preset", "fig9"],
        ["sweep", "--preset", "fig1_left", "--grid", "1"],
        ["sweep", "--config", "/nonexistent/cfg.json"],
        ["sweep", "--preset", "fig1_left", "-o", "/dev/null/x"],
        ["find-ep", "--preset", "fig1_left", "--unknowns", "a"],
        ["find-ep", "--preset", "fig1_left", "--unknowns", "a,beta"],
        ["find-ep", "--preset", "fig1_left", "--box", "0,1"],
        ["smatrix", "--resonance", "0,-0.1", "--energy", "1", "0", "10"],
        ["smatrix", "--resonance", "0,-0.1", "--energy", "0", "1", "1"],
        ["smatrix", "--resonance", "0"],
        ["smatrix"],
    ],
)
def test_config_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_bad_thread_count_is_a_config_error(tmp_path, monkeypatch):
    monkeypatch.setenv("EP_LAB_THREADS", "x")
    assert main(["sweep", "--preset", "fig1_left", "-o", str(tmp_path)]) == 2


def test_numeric_failure_exit_3(tmp_path, monkeypatch):
    import ep_lab.sweep as sweep

    def broken(sys):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(sweep, "eigenvalues", broken)
    assert main(["sweep", "--preset", "fig1_left", "--grid", "5", "-o", str(tmp_path)]) == 3


def test_find_ep_fig1_left(capsys, tmp_path):
    assert main(["find-ep", "--preset", "fig1_left", "-o", str(tmp_path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"params", "residual", "kind", "branch_context"}
    assert report["params"]["a"] == pytest.approx(0.666667, abs=1e-6)
    assert report["params"]["omega_r"] == pytest.approx(0.055, abs=1e-12)
    assert report["kind"] == "newton_general"
    assert json.loads((tmp_path / "ep.json").read_text()) == report


def test_find_ep_fig2_right_exits_4_with_certificate(capsys):
    assert main(["find-ep", "--preset", "fig2_right", "--unknowns", "a,omega_i"]) == 4
    err = capsys.readouterr().err
    assert "no convergence" in err
    assert "certificate: no EP" in err


def test_find_ep_with_seed_box_and_fix(capsys):
    argv = ["find-ep", "--preset", "fig1_right", "--unknowns", "omega_r,omega_i", "--fix", "a=0.5933333333333334"]
    assert main(argv + ["--box", "0,0.2,0,0.2", "--seed", "0.05,0.06"]) == 0
    p = json.loads(capsys.readouterr().out)["params"]
    assert p["omega_r"] == pytest.approx(p["omega_i"], abs=1e-8)


def test_smatrix_single_resonance_peak(tmp_path):
    argv = ["smatrix", "--resonance", "0.5,-0.1", "--energy", "0", "1", "101", "--features", "-o", str(tmp_path)]
    assert main(argv) == 0
    rows = read_rows(tmp_path / "sigma.csv")
    assert list(rows[0]) == ["E", "sigma", "S_re", "S_im"]
    peak = max(rows, key=lambda r: float(r["sigma"]))
    assert float(peak["E"]) == 0.5 and float(peak["sigma"]) == 4
    feats = json.loads((tmp_path / "features.json").read_text())
    assert [p["E"] for p in feats["peaks"]] == [0.5]


def test_smatrix_double_pole(tmp_path):
    argv = ["smatrix", "--double-pole", "E_d=0", "G_d=-0.2", "--energy", "-1", "1", "201", "-o", str(tmp_path)]
    assert main(argv) == 0
    rows = read_rows(tmp_path / "sigma.csv")
    assert float(rows[100]["E"]) == 0
    assert float(rows[100]["sigma"]) < 1e-12


def test_smatrix_from_sweep(tmp_path):
    argv = ["smatrix", "--preset", "fig1_left", "--from-sweep", "0.6", "-o", str(tmp_path)]
    assert main(argv) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["name"] == "fig1_left"
    assert len(manifest["options"]["resonances"]) == 2


def test_module_entry_point(tmp_path):
    env = dict(os.environ, EP_LAB_THREADS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "ep_lab", "sweep", "--preset", "fig2_right", "--grid", "21", "-o", str(tmp_path)],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "sweep.csv").exists()
