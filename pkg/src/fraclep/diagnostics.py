"""Trajectory diagnostics: Lyapunov decay, convergence, pattern statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fractional import caputo_l1_series
from .kinetics import SystemParams, equilibrium
from .solver import FieldState, Grid, RunResult

__all__ = [
    "LyapunovSample",
    "FieldStats",
    "PatternMetrics",
    "trapezoid_weights",
    "lyapunov_value",
    "lyapunov_monitor",
    "convergence_metrics",
    "pattern_metrics",
]

# relative slack for "never rises above its initial value"
LYAPUNOV_RISE_TOL = 1e-8
# the final value must drop below this fraction of the initial value
LYAPUNOV_DECAY_FRACTION = 0.01


def trapezoid_weights(grid: Grid) -> np.ndarray:
    """Tensor-product trapezoid quadrature weights over the grid nodes."""

    def axis(n: int, h: float) -> np.ndarray:
        w = np.full(n, h)
        w[0] = w[-1] = h / 2.0
        return w

    parts = [axis(n, h) for n, h in zip(grid.counts, grid.spacing)]
    if grid.dim == 1:
        return parts[0]
    return np.outer(parts[0], parts[1])


def lyapunov_value(state: FieldState, p: SystemParams, grid: Grid) -> float:
    """Energy functional integral of sb*(U^3/3 + u* U^2) + 2 V^2.

    U and V are deviations from the equilibrium and sb = sigma * b.  The
    integrand is nonnegative whenever u > 0 (U^2 * (U/3 + u*) stays
    positive there), and the functional decays along trajectories in the
    globally stable regime.
    """
    eq = equilibrium(p)
    sb = p.sigma * p.b
    uu = np.asarray(state.u, dtype=np.float64) - eq.u_star
    vv = np.asarray(state.v, dtype=np.float64) - eq.v_star
    integrand = sb * (uu**3 / 3.0 + eq.u_star * uu**2) + 2.0 * vv**2
    return float(np.sum(trapezoid_weights(grid) * integrand))


@dataclass(frozen=True)
class LyapunovSample:
    """One monitored point: time, functional value, discrete Caputo rate."""

    t: float
    value: float
    caputo_rate: float | None


def lyapunov_monitor(result: RunResult) -> tuple[list[LyapunovSample], str]:
    """Evaluate the functional on every snapshot and judge its decay.

    Verdict "consistent" means no snapshot value exceeds the initial one
    (up to 1e-8 relative) and the final value fell below 1 percent of the
    initial.  Both bounds are cushioned by an absolute roundoff floor
    scaled to the problem, so a trajectory that starts at the equilibrium
    (zero initial value) stays consistent despite solver noise at the
    1e-16 level.  The discrete Caputo rate of the value series is
    attached per sample when the snapshot cadence is uniform.
    """
    p = result.params
    values = np.array(
        [lyapunov_value(s, p, result.grid) for s in result.snapshots]
    )
    steps = np.asarray(result.snapshot_steps)
    times = steps * result.dt

    rates: list[float | None] = [None] * len(values)
    gaps = np.diff(steps)
    if len(values) >= 2 and np.all(gaps == gaps[0]):
        dt_snap = float(gaps[0]) * result.dt
        series = caputo_l1_series(values, p.delta, dt_snap)
        for i, r in enumerate(series):
            rates[i + 1] = float(r)

    first = values[0]
    # absolute floor: 1e-14 times the functional at a state displaced
    # from the equilibrium by the equilibrium values themselves
    eq = equilibrium(p)
    measure = float(trapezoid_weights(result.grid).sum())
    state_scale = p.sigma * p.b * (4.0 / 3.0) * eq.u_star**3 + 2.0 * eq.v_star**2
    floor = 1e-14 * measure * state_scale
    never_rises = bool(
        np.all(values <= max(first * (1.0 + LYAPUNOV_RISE_TOL), floor))
    )
    decayed = values[-1] <= max(LYAPUNOV_DECAY_FRACTION * first, floor)
    consistent = never_rises and decayed
    samples = [
        LyapunovSample(t=float(t), value=float(val), caputo_rate=r)
        for t, val, r in zip(times, values, rates)
    ]
    return samples, ("consistent" if consistent else "inconsistent")


def convergence_metrics(
    u_series: np.ndarray, v_series: np.ndarray, p: SystemParams
) -> tuple[float, float]:
    """(final_error, tail_amplitude) of a probe series.

    final_error: relative Euclidean distance of the last sample to the
    equilibrium.  tail_amplitude: max - min of u over the final quarter.
    """
    u = np.asarray(u_series, dtype=np.float64)
    v = np.asarray(v_series, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1 or len(u) < 4:
        raise ValueError("need matching 1D series with at least 4 samples")
    eq = equilibrium(p)
    norm = float(np.hypot(eq.u_star, eq.v_star))
    final_error = float(np.hypot(u[-1] - eq.u_star, v[-1] - eq.v_star)) / norm
    tail = u[(3 * len(u)) // 4 :]
    tail_amplitude = float(tail.max() - tail.min())
    return final_error, tail_amplitude


@dataclass(frozen=True)
class FieldStats:
    variance: float
    minimum: float
    maximum: float
    extrema: int


@dataclass(frozen=True)
class PatternMetrics:
    """Spatial statistics of one 2D snapshot, per field."""

    t: float
    u: FieldStats
    v: FieldStats


def _field_stats(f: np.ndarray) -> FieldStats:
    center = f[1:-1, 1:-1]
    shifts = [
        f[:-2, :-2], f[:-2, 1:-1], f[:-2, 2:],
        f[1:-1, :-2], f[1:-1, 2:],
        f[2:, :-2], f[2:, 1:-1], f[2:, 2:],
    ]
    strict_max = np.ones(center.shape, dtype=bool)
    for s in shifts:
        strict_max &= center > s
    return FieldStats(
        variance=float(np.var(f)),
        minimum=float(f.min()),
        maximum=float(f.max()),
        extrema=int(strict_max.sum()),
    )


def pattern_metrics(state: FieldState) -> PatternMetrics:
    """Variance, range and strict interior 8-neighbor maxima per field (2D).

    Plateau or ridge fields with ties among neighbors contribute no strict
    maxima by design; the count tracks isolated spots.
    """
    u = np.asarray(state.u)
    if u.ndim != 2:
        raise ValueError("pattern metrics are defined for 2D fields only")
    return PatternMetrics(
        t=float(state.t), u=_field_stats(state.u), v=_field_stats(state.v)
    )
