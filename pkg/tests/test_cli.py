"""End-to-end CLI tests: exit codes, artifact sets, reproducibility."""

import json
from pathlib import Path

import numpy as np
import pytest

import fraclep.kinetics as kin
import fraclep.verify
from fraclep.cli import main
from fraclep.kinetics import SystemParams
from fraclep.stability import critical_order

P157 = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0)


def write_cfg(tmp_path: Path, name: str, data: dict) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def query_cfg(a, b, sigma, d1, d2, delta, lengths, modes=None):
    geometry = {"dim": len(lengths), "lengths": list(lengths)}
    if modes is not None:
        geometry["modes"] = modes
    return {
        "params": {"a": a, "b": b, "sigma": sigma,
                   "d1": d1, "d2": d2, "delta": delta},
        "geometry": geometry,
    }


def run_cfg(**kw):
    data = {
        "params": {"a": 15.0, "b": 1.0, "sigma": 7.0,
                   "d1": 1.0, "d2": 10.0, "delta": 1.0},
        "geometry": {"dim": 1, "lengths": [20.0], "counts": [41]},
        "time": {"t_end": 0.2, "dt": 0.001},
        "ic": {"kind": "sinusoidal", "seed": 0},
        "output": {"dir": "out", "snapshot_every": 100, "probes": [[10.0]]},
    }
    data.update(kw)
    return data


def test_analyze_exit_oscillatory(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "q.json",
                    query_cfg(15, 1, 7, 1, 10, 1.0, [20.0]))
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    out = capsys.readouterr().out
    assert code == 3
    assert "OscillatoryUnstable" in out
    report = json.loads((tmp_path / "out" / "analysis.json").read_text())
    assert report["overall_verdict"] == "OscillatoryUnstable"
    assert (tmp_path / "out" / "manifest.json").exists()


def test_analyze_exit_turing(tmp_path):
    cfg = write_cfg(tmp_path, "q.json",
                    query_cfg(15, 1.2, 8, 1, 24, 1.0, [50.0], modes=64))
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 3
    report = json.loads((tmp_path / "out" / "analysis.json").read_text())
    assert report["overall_verdict"] == "TuringUnstable"
    lo, hi = report["turing_band"]
    assert lo == pytest.approx(0.3460, abs=1e-3)
    assert hi == pytest.approx(1.7340, abs=1e-3)


def test_analyze_exit_stable(tmp_path):
    cfg = write_cfg(tmp_path, "q.json",
                    query_cfg(4, 1, 2, 1, 1, 0.9, [20.0]))
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 0


def test_analyze_exit_marginal(tmp_path):
    dstar = critical_order(P157)
    cfg = write_cfg(tmp_path, "q.json",
                    query_cfg(15, 1, 7, 1, 10, dstar, [20.0]))
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 4
    report = json.loads((tmp_path / "out" / "analysis.json").read_text())
    assert report["overall_verdict"] == "Indeterminate"
    assert report["ode"]["verdict"] == "MarginalAtGivenDelta"


def test_analyze_accepts_run_config(tmp_path):
    cfg = write_cfg(tmp_path, "r.json", run_cfg())
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 3  # oscillatory parameters


def test_config_error_exit_code(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "bad.json", {"params": {}})
    code = main(["analyze", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "geometry" in err


def test_missing_config_file(tmp_path):
    code = main(["analyze", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "out")])
    assert code == 1


def test_simulate_writes_declared_artifacts(tmp_path):
    cfg = write_cfg(tmp_path, "r.json", run_cfg())
    out = tmp_path / "sim"
    code = main(["simulate", "--config", cfg, "--out", str(out)])
    assert code == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["status"] == "completed"
    declared = {f["path"] for f in man["files"]}
    on_disk = {p.name for p in out.iterdir()} - {"manifest.json"}
    assert declared == on_disk
    # snapshots at steps 0,100,200 plus probe and lyapunov series
    assert "state_t0.csv" in declared
    assert "state_t200.csv" in declared
    assert "probe_0.csv" in declared
    assert "lyapunov.csv" in declared
    roles = {f["path"]: f["role"] for f in man["files"]}
    assert roles["probe_0.csv"] == "probe-series"
    assert roles["state_t0.csv"] == "snapshot"


def test_simulate_seed_override_and_determinism(tmp_path):
    data = run_cfg(ic={"kind": "random-perturbation", "seed": 3},
                   time={"t_end": 0.05, "dt": 0.001})
    cfg = write_cfg(tmp_path, "r.json", data)
    out1, out2, out3 = (tmp_path / n for n in ("s1", "s2", "s3"))
    assert main(["simulate", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(out2)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(out3),
                 "--seed", "99"]) == 0
    final1 = (out1 / "state_t50.csv").read_bytes()
    final2 = (out2 / "state_t50.csv").read_bytes()
    final3 = (out3 / "state_t50.csv").read_bytes()
    assert final1 == final2
    assert final1 != final3
    man3 = json.loads((out3 / "manifest.json").read_text())
    assert man3["seed"] == 99
    assert man3["config"]["ic"]["seed"] == 99


def test_simulate_2d_writes_grids_and_patterns(tmp_path):
    data = run_cfg(
        geometry={"dim": 2, "lengths": [10.0, 10.0], "counts": [9, 9]},
        time={"t_end": 0.02, "dt": 0.001},
        ic={"kind": "random-perturbation", "seed": 1},
        output={"dir": "o", "snapshot_every": 10, "probes": [[5.0, 5.0]]},
    )
    cfg = write_cfg(tmp_path, "r2.json", data)
    out = tmp_path / "sim2"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    declared = {f["path"] for f in man["files"]}
    assert {"u_t0.csv", "v_t0.csv", "u_t0.pgm", "v_t0.pgm"} <= declared
    assert "patterns.csv" in declared
    roles = {f["path"]: f["role"] for f in man["files"]}
    assert roles["u_t0.pgm"] == "render"
    assert roles["patterns.csv"] == "pattern-metrics"


@pytest.mark.filterwarnings("ignore:overflow", "ignore:invalid value")
def test_simulate_abort_manifest(tmp_path):
    data = run_cfg(time={"t_end": 1e9, "dt": 1e3},
                   output={"dir": "o", "snapshot_every": 1000000})
    cfg = write_cfg(tmp_path, "r.json", data)
    out = tmp_path / "boom"
    code = main(["simulate", "--config", cfg, "--out", str(out)])
    assert code == 2
    man = json.loads((out / "manifest.json").read_text())
    assert man["status"] == "aborted"
    assert man["failed_step"] >= 1
    assert man["files"] == []


def test_simulate_rejects_query_config(tmp_path):
    cfg = write_cfg(tmp_path, "q.json", query_cfg(4, 1, 2, 1, 1, 0.9, [20.0]))
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "x")]) == 1


def test_sweep_delta_table(tmp_path):
    data = run_cfg(
        geometry={"dim": 1, "lengths": [1.0], "counts": [3]},
        time={"t_end": 30.0, "dt": 0.01},
        ic={"kind": "uniform", "u0": 1.0, "v0": 2.0},
        output={"dir": "o", "snapshot_every": 1000},
    )
    cfg = write_cfg(tmp_path, "r.json", data)
    out = tmp_path / "sweep"
    code = main(["sweep-delta", "--config", cfg, "--from", "0.9",
                 "--to", "1.0", "--steps", "3", "--out", str(out)])
    assert code == 0
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines[0] == "delta,final_error,tail_amplitude"
    assert len(lines) == 4
    deltas = [float(l.split(",")[0]) for l in lines[1:]]
    assert deltas == pytest.approx([0.9, 0.95, 1.0])
    for d in deltas:
        sub = out / f"delta_{d:.6f}"
        assert (sub / "manifest.json").exists()
        assert (sub / "probe_0.csv").exists()


def test_sweep_delta_range_validation(tmp_path):
    cfg = write_cfg(tmp_path, "r.json", run_cfg())
    assert main(["sweep-delta", "--config", cfg, "--from", "0.0",
                 "--to", "1.0", "--steps", "2", "--out", str(tmp_path / "s")]) == 1
    assert main(["sweep-delta", "--config", cfg, "--from", "0.9",
                 "--to", "0.5", "--steps", "2", "--out", str(tmp_path / "s")]) == 1


def test_verify_command_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out
    assert "[FAIL]" not in out


def test_verify_detects_sabotaged_jacobian(monkeypatch, capsys):
    # mutation check: break the closed-form Jacobian and the
    # finite-difference cross-check must go red, exit code 5
    real = kin.jacobian_summary

    def lying(p):
        js = real(p)
        return kin.JacobianSummary(
            fu=js.fu, fv=-js.fv, gu=js.gu, gv=js.gv,
            trace=js.trace, det=js.det, discriminant=js.discriminant,
        )

    monkeypatch.setattr(kin, "jacobian_summary", lying)
    assert main(["verify"]) == 5
    out = capsys.readouterr().out
    assert "[FAIL] jacobian vs finite differences" in out
