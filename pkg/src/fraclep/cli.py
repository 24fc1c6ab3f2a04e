"""Command-line surface: analyze, simulate, sweep-delta, verify.

Exit codes: 0 success / stable verdict, 1 I/O or config failure,
2 non-finite simulation abort, 3 any instability verdict, 4 marginal or
indeterminate verdict, 5 verify-suite failure.  FRACLEP_THREADS sizes
the sweep worker pool (default 1); everything else is single-threaded.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import ConfigError, SimConfig, StabilityQuery, parse_config
from .diagnostics import convergence_metrics, lyapunov_monitor, pattern_metrics
from .outputs import (
    fmt,
    write_lyapunov_series,
    write_manifest,
    write_pattern_series,
    write_probe_series,
    write_report,
    write_snapshot_1d,
    write_snapshot_2d,
)
from .solver import NonFiniteStateError, RunResult, run
from .stability import OverallVerdict, pde_classify
from .verify import run_verify

__all__ = ["main", "cmd_analyze", "cmd_simulate", "cmd_sweep_delta", "cmd_verify"]

EXIT_OK = 0
EXIT_IO = 1
EXIT_NONFINITE = 2
EXIT_UNSTABLE = 3
EXIT_MARGINAL = 4
EXIT_VERIFY_FAILED = 5

_VERDICT_CODES = {
    OverallVerdict.STABLE: EXIT_OK,
    OverallVerdict.TURING: EXIT_UNSTABLE,
    OverallVerdict.OSCILLATORY: EXIT_UNSTABLE,
    OverallVerdict.INDETERMINATE: EXIT_MARGINAL,
}


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_IO


def cmd_analyze(config_path: str, out_dir: str) -> int:
    try:
        cfg = parse_config(config_path)
    except ConfigError as exc:
        return _fail(str(exc))
    if isinstance(cfg, SimConfig):
        query = StabilityQuery(params=cfg.params, lengths=cfg.grid.lengths)
    else:
        query = cfg
    report = pde_classify(query.params, query.lengths, query.modes)
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        files = [{"path": write_report(out, report), "role": "stability-report"}]
        write_manifest(out, "analyze", query, files)
    except OSError as exc:
        return _fail(f"cannot write outputs: {exc}")
    print(f"overall verdict: {report.overall.value}")
    print(f"well-mixed verdict: {report.ode.verdict.value} ({report.ode.case_tag})")
    if report.ode.critical_order is not None:
        print(f"critical order: {fmt(report.ode.critical_order)}")
    if report.turing_band is not None:
        lo, hi = report.turing_band
        print(f"diffusion-driven band: ({fmt(lo)}, {fmt(hi)})")
    for note in report.notes:
        print(f"note: {note}")
    return _VERDICT_CODES[report.overall]


def _write_run_outputs(cfg: SimConfig, result: RunResult, out: Path) -> list[dict]:
    files: list[dict] = []
    for step, snap in zip(result.snapshot_steps, result.snapshots):
        if cfg.grid.dim == 1:
            name = write_snapshot_1d(out, step, cfg.grid, snap)
            files.append({"path": name, "role": "snapshot"})
        else:
            for name in write_snapshot_2d(out, step, cfg.grid, snap):
                role = "snapshot" if name.endswith(".csv") else "render"
                files.append({"path": name, "role": role})
    for i in range(len(result.probe_indices)):
        t, u, v = result.probe_series(i)
        files.append({"path": write_probe_series(out, i, t, u, v),
                      "role": "probe-series"})
    samples, verdict = lyapunov_monitor(result)
    files.append({"path": write_lyapunov_series(out, samples),
                  "role": "lyapunov-series"})
    print(f"lyapunov monitor: {verdict}")
    if cfg.grid.dim == 2:
        series = [pattern_metrics(s) for s in result.snapshots]
        files.append({"path": write_pattern_series(out, series),
                      "role": "pattern-metrics"})
    return files


def _simulate_into(cfg: SimConfig, out: Path) -> tuple[int, RunResult | None]:
    """Run one config, writing all artifacts into ``out``."""
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return _fail(f"cannot create {out}: {exc}"), None
    try:
        result = run(
            cfg.params,
            cfg.grid,
            t_end=cfg.t_end,
            dt=cfg.dt,
            ic_kind=cfg.ic.kind,
            seed=cfg.seed,
            ic_u0=cfg.ic.u0,
            ic_v0=cfg.ic.v0,
            snapshot_every=cfg.snapshot_every,
            probes=cfg.probes or None,
            memory_window=cfg.memory_window,
        )
    except NonFiniteStateError as exc:
        write_manifest(out, "simulate", cfg, [], status="aborted",
                       failed_step=exc.step, seed=cfg.seed)
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_NONFINITE, None
    try:
        files = _write_run_outputs(cfg, result, out)
        write_manifest(out, "simulate", cfg, files, seed=cfg.seed)
    except OSError as exc:
        return _fail(f"cannot write outputs: {exc}"), None
    return EXIT_OK, result


def cmd_simulate(config_path: str, out_dir: str | None, seed: int | None = None) -> int:
    try:
        cfg = parse_config(config_path)
    except ConfigError as exc:
        return _fail(str(exc))
    if not isinstance(cfg, SimConfig):
        return _fail("simulate needs a run config with time, ic and output sections")
    if seed is not None:
        cfg = cfg.with_seed(seed)
    out = Path(out_dir) if out_dir else Path(cfg.out_dir)
    code, result = _simulate_into(cfg, out)
    if result is not None:
        print(f"completed {result.n_steps} steps; wrote {out}")
    return code


def cmd_sweep_delta(
    config_path: str, start: float, stop: float, steps: int, out_dir: str
) -> int:
    try:
        cfg = parse_config(config_path)
    except ConfigError as exc:
        return _fail(str(exc))
    if not isinstance(cfg, SimConfig):
        return _fail("sweep-delta needs a run config with time, ic and output sections")
    if not (0.0 < start <= stop <= 1.0):
        return _fail("sweep range must satisfy 0 < from <= to <= 1")
    if steps < 1:
        return _fail("sweep needs at least one step")
    deltas = np.linspace(start, stop, steps)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return _fail(f"cannot create {out}: {exc}")

    def one(delta: float) -> tuple[float, int, float, float]:
        sub = out / f"delta_{delta:.6f}"
        code, result = _simulate_into(cfg.with_delta(float(delta)), sub)
        if result is None:
            return float(delta), code, float("nan"), float("nan")
        _, u, v = result.probe_series(0)
        err, amp = convergence_metrics(u, v, result.params)
        return float(delta), code, err, amp

    workers = max(1, int(os.environ.get("FRACLEP_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, deltas))
    else:
        rows = [one(d) for d in deltas]

    lines = ["delta,final_error,tail_amplitude"]
    for delta, _, err, amp in rows:
        lines.append(f"{fmt(delta)},{fmt(err)},{fmt(amp)}")
    try:
        (out / "sweep.csv").write_text("\n".join(lines) + "\n")
        write_manifest(out, "sweep-delta", cfg,
                       [{"path": "sweep.csv", "role": "sweep-table"}],
                       seed=cfg.seed)
    except OSError as exc:
        return _fail(f"cannot write sweep table: {exc}")
    print(f"swept {len(rows)} orders; wrote {out / 'sweep.csv'}")
    return max((code for _, code, _, _ in rows), default=EXIT_OK)


def cmd_verify() -> int:
    return EXIT_OK if run_verify(print) else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fraclep",
        description="Time-fractional activator-inhibitor simulation and stability analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="classify stability for a config")
    pa.add_argument("--config", required=True)
    pa.add_argument("--out", required=True)

    ps = sub.add_parser("simulate", help="integrate a config and write artifacts")
    ps.add_argument("--config", required=True)
    ps.add_argument("--out", default=None)
    ps.add_argument("--seed", type=int, default=None)

    pw = sub.add_parser("sweep-delta", help="repeat a run across fractional orders")
    pw.add_argument("--config", required=True)
    pw.add_argument("--from", dest="start", type=float, required=True)
    pw.add_argument("--to", dest="stop", type=float, required=True)
    pw.add_argument("--steps", type=int, required=True)
    pw.add_argument("--out", required=True)

    sub.add_parser("verify", help="run the built-in oracle suite")

    args = parser.parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(args.config, args.out)
    if args.command == "simulate":
        return cmd_simulate(args.config, args.out, args.seed)
    if args.command == "sweep-delta":
        return cmd_sweep_delta(args.config, args.start, args.stop, args.steps, args.out)
    return cmd_verify()


if __name__ == "__main__":
    sys.exit(main())
