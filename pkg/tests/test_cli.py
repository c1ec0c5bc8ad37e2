import csv
import json
import subprocess
import sys

import pytest

from paramres.cli import TRACE_HEADER, main
from paramres.analysis import SWEEP_COLUMNS


def run(*args):
    return main([str(a) for a in args])


def load(path):
    return json.loads(path.read_text())


def header(path):
    with open(path, newline="") as fh:
        return tuple(next(csv.reader(fh)))


def test_evolve_writes_state_and_manifest(tmp_path):
    trace = tmp_path / "trace.csv"
    assert run("evolve", "--h", 0.03, "--r", 0.9, "--nu", 300, "--out", tmp_path, "--trace", trace) == 0
    state = load(tmp_path / "state.json")
    assert state["p0"] == pytest.approx(0.8632975654368334, abs=1e-8)
    assert state["norm_residual"] < 1e-7
    assert header(trace) == TRACE_HEADER
    manifest = load(tmp_path / "manifest.json")
    assert manifest["command"] == "evolve"
    assert manifest["parameters"]["nu"] == 300
    assert set(manifest["outputs"]) == {str(tmp_path / "state.json"), str(trace)}


def test_spectrum_outputs(tmp_path):
    assert run("spectrum", "--h", 0.03, "--eps-bar", 0.018, "--nu", 300, "--out", tmp_path) == 0
    assert header(tmp_path / "spectrum.csv") == ("n", "p_n")
    summary = load(tmp_path / "spectrum.json")
    assert summary["tail_mass"] <= 1e-7 and summary["truncated"] is False
    for name in ("pn_vs_n.dat", "log_ratio_vs_log_n.dat", "log_pn_vs_n.dat"):
        assert (tmp_path / name).read_text().startswith("#")


def test_sweep_outputs(tmp_path):
    assert run("sweep", "--h", 0.1, "--nu", 30, "--r-steps", 41, "--out", tmp_path) == 0
    assert header(tmp_path / "sweep.csv") == SWEEP_COLUMNS
    summary = load(tmp_path / "sweep.json")
    assert summary["points"] == 41 and summary["errors"] == 0
    assert (tmp_path / "p0_vs_r.dat").exists()
    assert (tmp_path / "ratio_p2_p0_vs_r.dat").exists()


def test_sweep_single_point(tmp_path):
    assert run("sweep", "--h", 0.1, "--nu", 10, "--r-min", 0.2, "--r-max", 0.2, "--r-steps", 1,
               "--out", tmp_path) == 0
    summary = load(tmp_path / "sweep.json")
    assert summary["points"] == 1 and summary["transition"] is None


def test_sweep_without_drive_is_not_fatal(tmp_path):
    assert run("sweep", "--h", 0.0, "--nu", 10, "--r-steps", 3, "--out", tmp_path) == 0
    assert load(tmp_path / "sweep.json")["errors"] == 3


def test_sweep_identical_across_threads(tmp_path):
    blobs = []
    for threads in (1, 4, 8):
        out = tmp_path / f"t{threads}"
        assert run("sweep", "--h", 0.05, "--nu", 40, "--r-steps", 25, "--threads", threads,
                   "--out", out) == 0
        blobs.append({p.name: p.read_bytes() for p in out.iterdir() if p.name != "manifest.json"})
    assert blobs[0] == blobs[1] == blobs[2]


def test_classical_outputs(tmp_path):
    assert run("classical", "--h", 0.1, "--r", 0.2, "--nu", 50, "--out", tmp_path) == 0
    assert header(tmp_path / "classical_trajectory.csv") == ("tau", "x", "v")
    info = load(tmp_path / "classical.json")
    assert info["pr_condition"] is True and info["floquet_growth"] > 1
    assert info["oracle_b_diff"] < 1e-6
    assert info["energy_classical"] == pytest.approx(info["energy_quantum"], rel=1e-7)


def test_fit_from_simulation(tmp_path):
    assert run("fit", "--h", 0.03, "--r", 0.6, "--nu", 300, "--out", tmp_path) == 0
    fit = load(tmp_path / "fit.json")
    assert list(fit["fits"]) == ["exponential"]
    assert fit["fits"]["exponential"]["r_squared"] > 0.99


def test_fit_from_spectrum_file(tmp_path):
    lines = ["n,p_n"] + [f"{2 * k},{0.9 * 0.5 ** k!r}" for k in range(12)]
    src = tmp_path / "in.csv"
    src.write_text("\n".join(lines) + "\n")
    assert run("fit", "--spectrum", src, "--model", "both", "--out", tmp_path) == 0
    fits = load(tmp_path / "fit.json")["fits"]
    assert fits["exponential"]["slope"] == pytest.approx(-0.5 * 0.6931471805599453, rel=1e-12)
    assert "power_law" in fits


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("h = 0.1\nnu = 20\nr = 0.3\nrel-tol = 1e-11\n")
    assert run("evolve", "--config", cfg, "--nu", 10, "--out", tmp_path) == 0
    manifest = load(tmp_path / "manifest.json")
    assert manifest["parameters"]["nu"] == 10
    assert manifest["parameters"]["h"] == 0.1
    assert manifest["config"]["rel_tol"] == 1e-11


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("h = 0.1\nbogus = 3\n")
    assert run("evolve", "--config", cfg, "--nu", 10, "--out", tmp_path) == 2


@pytest.mark.parametrize("args", [
    ("evolve", "--h", 1.5, "--r", 0.1, "--nu", 10),
    ("evolve", "--h", 0.1, "--r", 0.1, "--nu", 0),
    ("evolve", "--h", 0.0, "--r", 0.1, "--nu", 10),
    ("evolve", "--r", 0.1),
    ("sweep", "--h", 0.1, "--nu", 10, "--r-steps", 0),
])
def test_invalid_input_exit_code(tmp_path, args):
    assert run(*args, "--out", tmp_path) == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        run("evolve", "--h", 0.1, "--r", 0.1, "--eps-bar", 0.1, "--nu", 3)
    assert exc.value.code == 2


def test_numerical_failure_exit_code(tmp_path):
    assert run("evolve", "--h", 0.9, "--r", 0, "--nu", 200, "--abs-tol", 1e-2, "--rel-tol", 1e-2,
               "--out", tmp_path) == 3
    short = tmp_path / "short.csv"
    short.write_text("n,p_n\n0,0.9\n2,0.05\n")
    assert run("fit", "--spectrum", short, "--out", tmp_path) == 3


def test_io_failure_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("evolve", "--h", 0.1, "--r", 0.1, "--nu", 3, "--out", blocker / "sub") == 4


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "paramres.cli", "evolve", "--h", "0.1", "--r", "0.2",
                           "--nu", "5", "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "state.json").exists()
