"""File writers: CSV snapshots and series, PGM renders, JSON artifacts.

All numeric text uses 12 significant digits via the C locale-independent
repr path, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import SimConfig, StabilityQuery, serialize_config
from .diagnostics import LyapunovSample, PatternMetrics
from .kinetics import equilibrium, jacobian_summary
from .solver import FieldState, Grid
from .stability import StabilityReport

__all__ = [
    "fmt",
    "write_snapshot_1d",
    "write_snapshot_2d",
    "write_probe_series",
    "write_lyapunov_series",
    "write_pattern_series",
    "report_to_dict",
    "write_report",
    "write_manifest",
]


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_snapshot_1d(out_dir: Path, step: int, grid: Grid, state: FieldState) -> str:
    name = f"state_t{step}.csv"
    xs = grid.axes()[0]
    lines = ["t,x,u,v"]
    for x, u, v in zip(xs, state.u, state.v):
        lines.append(f"{fmt(state.t)},{fmt(x)},{fmt(u)},{fmt(v)}")
    (out_dir / name).write_text("\n".join(lines) + "\n")
    return name


def _write_grid_csv(path: Path, grid: Grid, field: np.ndarray) -> None:
    # header row carries x coordinates; each data row is one y level
    xs, ys = grid.axes()
    lines = ["y\\x," + ",".join(fmt(x) for x in xs)]
    for j, y in enumerate(ys):
        lines.append(fmt(y) + "," + ",".join(fmt(field[i, j]) for i in range(len(xs))))
    path.write_text("\n".join(lines) + "\n")


def _write_pgm(path: Path, field: np.ndarray) -> None:
    # 8-bit grayscale, min-max normalized per snapshot; flat fields render black
    lo = float(field.min())
    hi = float(field.max())
    if hi > lo:
        scaled = np.round((field - lo) / (hi - lo) * 255.0)
    else:
        scaled = np.zeros_like(field)
    img = scaled.astype(np.uint8).T  # rows are y levels
    header = f"P5\n{field.shape[0]} {field.shape[1]}\n255\n".encode("ascii")
    path.write_bytes(header + img.tobytes())


def write_snapshot_2d(out_dir: Path, step: int, grid: Grid, state: FieldState) -> list[str]:
    names = []
    for label, field in (("u", state.u), ("v", state.v)):
        csv_name = f"{label}_t{step}.csv"
        _write_grid_csv(out_dir / csv_name, grid, field)
        names.append(csv_name)
        pgm_name = f"{label}_t{step}.pgm"
        _write_pgm(out_dir / pgm_name, field)
        names.append(pgm_name)
    return names


def write_probe_series(out_dir: Path, index: int, t, u, v) -> str:
    name = f"probe_{index}.csv"
    lines = ["t,u,v"]
    for row in zip(t, u, v):
        lines.append(",".join(fmt(x) for x in row))
    (out_dir / name).write_text("\n".join(lines) + "\n")
    return name


def write_lyapunov_series(out_dir: Path, samples: list[LyapunovSample]) -> str:
    name = "lyapunov.csv"
    lines = ["t,L"]
    for s in samples:
        lines.append(f"{fmt(s.t)},{fmt(s.value)}")
    (out_dir / name).write_text("\n".join(lines) + "\n")
    return name


def write_pattern_series(out_dir: Path, series: list[PatternMetrics]) -> str:
    name = "patterns.csv"
    header = ("t,u_variance,u_min,u_max,u_extrema,"
              "v_variance,v_min,v_max,v_extrema")
    lines = [header]
    for m in series:
        lines.append(",".join([
            fmt(m.t),
            fmt(m.u.variance), fmt(m.u.minimum), fmt(m.u.maximum), str(m.u.extrema),
            fmt(m.v.variance), fmt(m.v.minimum), fmt(m.v.maximum), str(m.v.extrema),
        ]))
    (out_dir / name).write_text("\n".join(lines) + "\n")
    return name


def _complex_pair(eigs) -> list[list[float]]:
    return [[z.real, z.imag] for z in eigs]


def report_to_dict(report: StabilityReport) -> dict:
    p = report.params
    eq = equilibrium(p)
    js = jacobian_summary(p)
    return {
        "params": {"a": p.a, "b": p.b, "sigma": p.sigma,
                   "d1": p.d1, "d2": p.d2, "delta": p.delta},
        "equilibrium": {"u": eq.u_star, "v": eq.v_star},
        "jacobian": {"fu": js.fu, "fv": js.fv, "gu": js.gu, "gv": js.gv,
                     "trace": js.trace, "det": js.det,
                     "discriminant": js.discriminant},
        "ode": {
            "verdict": report.ode.verdict.value,
            "eigenvalues": _complex_pair(report.ode.eigenvalues),
            "critical_order": report.ode.critical_order,
            "case_tag": report.ode.case_tag,
            "margin": report.ode.margin,
        },
        "modes": [
            {
                "lap_eigenvalue": m.lap_eigenvalue,
                "trace": m.trace,
                "det": m.det,
                "discriminant": m.discriminant,
                "eigenvalues": _complex_pair(m.eigenvalues),
                "margin": m.margin,
                "stable": m.stable,
            }
            for m in report.modes
        ],
        "turing_band": list(report.turing_band) if report.turing_band else None,
        "discriminant_roots": (list(report.discriminant_roots)
                               if report.discriminant_roots else None),
        "d2_threshold": report.d2_threshold,
        "overall_verdict": report.overall.value,
        "notes": list(report.notes),
    }


def write_report(out_dir: Path, report: StabilityReport) -> str:
    name = "analysis.json"
    (out_dir / name).write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
    return name


def write_manifest(
    out_dir: Path,
    command: str,
    config: SimConfig | StabilityQuery | None,
    files: list[dict],
    status: str = "completed",
    failed_step: int | None = None,
    seed: int | None = None,
) -> str:
    """Record exactly the artifacts this invocation wrote."""
    name = "manifest.json"
    payload = {
        "artifact": "fraclep",
        "version": "0.1.0",
        "command": command,
        "status": status,
        "failed_step": failed_step,
        "seed": seed,
        "config": serialize_config(config) if config is not None else None,
        "files": files,
    }
    (out_dir / name).write_text(json.dumps(payload, indent=2) + "\n")
    return name
