"""Strict JSON config parsing and serialization for runs and analyses.

Two config shapes share the params/geometry sections.  A file with time,
ic and output sections is a simulation config; one with only params and
geometry (plus an optional mode count) is a stability query.  Unknown
keys anywhere are rejected, and every diagnostic names the offending
field and the constraint it violated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .kinetics import SystemParams
from .solver import IC_KINDS, Grid

__all__ = [
    "ConfigError",
    "ICSpec",
    "SimConfig",
    "StabilityQuery",
    "parse_config",
    "parse_config_data",
    "serialize_config",
]


class ConfigError(ValueError):
    """Config rejected; the message carries the field path and constraint."""


@dataclass(frozen=True)
class ICSpec:
    """Named initial condition; u0/v0 apply to the uniform kind only."""

    kind: str
    u0: float | None = None
    v0: float | None = None


@dataclass(frozen=True)
class SimConfig:
    params: SystemParams
    grid: Grid
    t_end: float
    dt: float
    ic: ICSpec
    seed: int = 0
    snapshot_every: int = 1
    memory_window: int | None = None
    probes: tuple[tuple[float, ...], ...] = ()
    out_dir: str = "out"

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=int(seed))

    def with_delta(self, delta: float) -> "SimConfig":
        return replace(self, params=replace(self.params, delta=float(delta)))


@dataclass(frozen=True)
class StabilityQuery:
    params: SystemParams
    lengths: tuple[float, ...]
    modes: int = 128


def _require(cond: bool, field: str, constraint: str):
    if not cond:
        raise ConfigError(f"config field {field}: {constraint}")


def _section(data: dict, name: str, allowed: set[str], required: set[str]) -> dict:
    sec = data.get(name)
    _require(isinstance(sec, dict), name, "must be an object")
    unknown = set(sec) - allowed
    _require(not unknown, name, f"unknown keys {sorted(unknown)}")
    missing = required - set(sec)
    _require(not missing, name, f"missing required keys {sorted(missing)}")
    return sec


def _number(sec: dict, path: str, key: str, positive=True) -> float:
    value = sec[key]
    field = f"{path}.{key}"
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             field, "must be a number")
    if positive:
        _require(value > 0, field, "must be strictly positive")
    return float(value)


def _integer(sec: dict, path: str, key: str, minimum: int) -> int:
    value = sec[key]
    field = f"{path}.{key}"
    _require(isinstance(value, int) and not isinstance(value, bool),
             field, "must be an integer")
    _require(value >= minimum, field, f"must be >= {minimum}")
    return int(value)


def _parse_params(data: dict) -> SystemParams:
    sec = _section(data, "params", {"a", "b", "sigma", "d1", "d2", "delta"},
                   {"a", "b", "sigma", "d1", "d2", "delta"})
    delta = _number(sec, "params", "delta")
    _require(delta <= 1.0, "params.delta", "must lie in (0, 1]")
    return SystemParams(
        a=_number(sec, "params", "a"),
        b=_number(sec, "params", "b"),
        sigma=_number(sec, "params", "sigma"),
        d1=_number(sec, "params", "d1"),
        d2=_number(sec, "params", "d2"),
        delta=delta,
    )


def _parse_geometry(data: dict, want_counts: bool):
    allowed = {"dim", "lengths", "counts"} | (set() if want_counts else {"modes"})
    required = {"dim", "lengths"} | ({"counts"} if want_counts else set())
    sec = _section(data, "geometry", allowed, required)
    dim = _integer(sec, "geometry", "dim", 1)
    _require(dim in (1, 2), "geometry.dim", "must be 1 or 2")
    lengths = sec["lengths"]
    _require(
        isinstance(lengths, list) and len(lengths) == dim
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0
                for x in lengths),
        "geometry.lengths", f"must be a list of {dim} positive numbers",
    )
    lengths = tuple(float(x) for x in lengths)
    counts = None
    if "counts" in sec:
        raw = sec["counts"]
        _require(
            isinstance(raw, list) and len(raw) == dim
            and all(isinstance(n, int) and not isinstance(n, bool) and n >= 3
                    for n in raw),
            "geometry.counts", f"must be a list of {dim} integers >= 3",
        )
        counts = tuple(int(n) for n in raw)
    modes = None
    if "modes" in sec:
        modes = _integer(sec, "geometry", "modes", 1)
    return lengths, counts, modes


def parse_config_data(data: dict) -> SimConfig | StabilityQuery:
    """Validate an already-decoded JSON object."""
    _require(isinstance(data, dict), "<root>", "must be a JSON object")
    known = {"params", "geometry", "time", "ic", "output"}
    unknown = set(data) - known
    _require(not unknown, "<root>", f"unknown sections {sorted(unknown)}")
    _require("params" in data, "<root>", "missing section params")
    _require("geometry" in data, "<root>", "missing section geometry")

    run_sections = {"time", "ic", "output"} & set(data)
    if not run_sections:
        params = _parse_params(data)
        lengths, _, modes = _parse_geometry(data, want_counts=False)
        return StabilityQuery(params=params, lengths=lengths,
                              modes=128 if modes is None else modes)

    _require(
        run_sections == {"time", "ic", "output"},
        "<root>",
        "a run config needs all of time, ic and output "
        f"(found only {sorted(run_sections)})",
    )
    params = _parse_params(data)
    lengths, counts, _ = _parse_geometry(data, want_counts=True)
    grid = Grid(lengths=lengths, counts=counts)

    time_sec = _section(data, "time", {"t_end", "dt", "memory_window"},
                        {"t_end", "dt"})
    t_end = _number(time_sec, "time", "t_end")
    dt = _number(time_sec, "time", "dt")
    _require(t_end >= dt, "time.t_end", "must be >= dt")
    window = None
    if "memory_window" in time_sec:
        raw = time_sec["memory_window"]
        if raw != "full":
            _require(isinstance(raw, int) and not isinstance(raw, bool) and raw >= 1,
                     "time.memory_window", 'must be "full" or an integer >= 1')
            window = int(raw)

    ic_sec = _section(data, "ic", {"kind", "seed", "u0", "v0"}, {"kind"})
    kind = ic_sec["kind"]
    _require(kind in IC_KINDS, "ic.kind", f"must be one of {list(IC_KINDS)}")
    seed = _integer(ic_sec, "ic", "seed", 0) if "seed" in ic_sec else 0
    u0 = _number(ic_sec, "ic", "u0", positive=False) if "u0" in ic_sec else None
    v0 = _number(ic_sec, "ic", "v0", positive=False) if "v0" in ic_sec else None
    for name, val in (("u0", u0), ("v0", v0)):
        if val is not None:
            _require(val >= 0, f"ic.{name}", "must be nonnegative")
            _require(kind == "uniform", f"ic.{name}",
                     'only applies to the "uniform" kind')

    out_sec = _section(data, "output", {"dir", "snapshot_every", "probes"}, set())
    out_dir = out_sec.get("dir", "out")
    _require(isinstance(out_dir, str) and out_dir != "", "output.dir",
             "must be a nonempty string")
    snap = (_integer(out_sec, "output", "snapshot_every", 1)
            if "snapshot_every" in out_sec else 1)
    probes: tuple[tuple[float, ...], ...] = ()
    if "probes" in out_sec:
        raw = out_sec["probes"]
        _require(isinstance(raw, list), "output.probes", "must be a list")
        coords = []
        for i, entry in enumerate(raw):
            _require(
                isinstance(entry, list) and len(entry) == grid.dim
                and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                        for x in entry),
                f"output.probes[{i}]",
                f"must be a list of {grid.dim} coordinates",
            )
            for x, L in zip(entry, grid.lengths):
                _require(0 <= x <= L, f"output.probes[{i}]",
                         f"coordinates must lie inside [0, {L}]")
            coords.append(tuple(float(x) for x in entry))
        probes = tuple(coords)

    return SimConfig(
        params=params, grid=grid, t_end=t_end, dt=dt,
        ic=ICSpec(kind=kind, u0=u0, v0=v0), seed=seed,
        snapshot_every=snap, memory_window=window,
        probes=probes, out_dir=out_dir,
    )


def parse_config(path) -> SimConfig | StabilityQuery:
    """Read and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config_data(data)


def serialize_config(cfg: SimConfig | StabilityQuery) -> dict:
    """Inverse of parse_config_data: parse(serialize(cfg)) == cfg."""
    if isinstance(cfg, StabilityQuery):
        return {
            "params": _params_dict(cfg.params),
            "geometry": {
                "dim": len(cfg.lengths),
                "lengths": list(cfg.lengths),
                "modes": cfg.modes,
            },
        }
    ic: dict = {"kind": cfg.ic.kind, "seed": cfg.seed}
    if cfg.ic.u0 is not None:
        ic["u0"] = cfg.ic.u0
    if cfg.ic.v0 is not None:
        ic["v0"] = cfg.ic.v0
    time_sec: dict = {"t_end": cfg.t_end, "dt": cfg.dt}
    if cfg.memory_window is not None:
        time_sec["memory_window"] = cfg.memory_window
    return {
        "params": _params_dict(cfg.params),
        "geometry": {
            "dim": cfg.grid.dim,
            "lengths": list(cfg.grid.lengths),
            "counts": list(cfg.grid.counts),
        },
        "time": time_sec,
        "ic": ic,
        "output": {
            "dir": cfg.out_dir,
            "snapshot_every": cfg.snapshot_every,
            "probes": [list(c) for c in cfg.probes],
        },
    }


def _params_dict(p: SystemParams) -> dict:
    return {"a": p.a, "b": p.b, "sigma": p.sigma,
            "d1": p.d1, "d2": p.d2, "delta": p.delta}
