"""Diagnostics oracles: quadrature, Lyapunov functional, probe metrics,
pattern statistics."""

import math

import numpy as np
import pytest

from fraclep.diagnostics import (
    FieldStats,
    convergence_metrics,
    lyapunov_monitor,
    lyapunov_value,
    pattern_metrics,
    trapezoid_weights,
)
from fraclep.kinetics import SystemParams, equilibrium
from fraclep.solver import FieldState, Grid, run

PSTABLE = SystemParams(a=4.0, b=1.0, sigma=2.0, d1=1.0, d2=1.0, delta=0.9)


def test_trapezoid_weights_sum_to_measure():
    g1 = Grid(lengths=(20.0,), counts=(41,))
    assert trapezoid_weights(g1).sum() == pytest.approx(20.0, rel=1e-14)
    g2 = Grid(lengths=(3.0, 5.0), counts=(7, 11))
    w2 = trapezoid_weights(g2)
    assert w2.shape == (7, 11)
    assert w2.sum() == pytest.approx(15.0, rel=1e-14)


def test_trapezoid_weights_integrate_linear_exactly():
    g = Grid(lengths=(2.0,), counts=(9,))
    x = g.axes()[0]
    # integral of x over [0,2] is 2; trapezoid is exact on linear data
    assert float(np.sum(trapezoid_weights(g) * x)) == pytest.approx(2.0, rel=1e-14)


def test_lyapunov_zero_at_equilibrium():
    g = Grid(lengths=(20.0,), counts=(41,))
    eq = equilibrium(PSTABLE)
    st = FieldState(t=0.0, u=np.full(g.shape, eq.u_star), v=np.full(g.shape, eq.v_star))
    assert lyapunov_value(st, PSTABLE, g) == 0.0


def test_lyapunov_uniform_offset_closed_form():
    # U = 1, V = 0: integrand is sigma*b*(1/3 + u*) everywhere, so the
    # value is (2/3 + 1.6) * |domain| for these parameters
    g = Grid(lengths=(20.0,), counts=(41,))
    eq = equilibrium(PSTABLE)
    st = FieldState(
        t=0.0,
        u=np.full(g.shape, eq.u_star + 1.0),
        v=np.full(g.shape, eq.v_star),
    )
    expect = (2.0 / 3.0 + 1.6) * 20.0
    assert lyapunov_value(st, PSTABLE, g) == pytest.approx(expect, rel=1e-12)


def test_lyapunov_uniform_v_offset():
    # U = 0, V = 2: integrand 2*V^2 = 8
    g = Grid(lengths=(10.0,), counts=(21,))
    eq = equilibrium(PSTABLE)
    st = FieldState(
        t=0.0,
        u=np.full(g.shape, eq.u_star),
        v=np.full(g.shape, eq.v_star + 2.0),
    )
    assert lyapunov_value(st, PSTABLE, g) == pytest.approx(80.0, rel=1e-12)


def test_lyapunov_monitor_consistent_on_decaying_run():
    g = Grid(lengths=(20.0,), counts=(21,))
    res = run(PSTABLE, g, t_end=60.0, dt=1e-2, ic_kind="random-perturbation",
              seed=11, snapshot_every=50)
    samples, verdict = lyapunov_monitor(res)
    assert verdict == "consistent"
    assert samples[-1].value < 0.01 * samples[0].value
    values = [s.value for s in samples]
    assert max(values) <= values[0] * (1.0 + 1e-8)


def test_lyapunov_monitor_at_equilibrium_start():
    # L(0) = 0 and later values are pure solver roundoff; the absolute
    # floor keeps the verdict consistent instead of tripping on 1e-29
    g = Grid(lengths=(20.0,), counts=(21,))
    res = run(PSTABLE, g, t_end=1.0, dt=1e-2, ic_kind="uniform", snapshot_every=10)
    samples, verdict = lyapunov_monitor(res)
    assert verdict == "consistent"
    assert samples[0].value == 0.0
    assert all(s.value <= 1e-20 for s in samples)


def test_lyapunov_monitor_flags_rising_functional():
    # oscillatory parameters push the state away from equilibrium, so
    # the functional must rise and the monitor must say so
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0)
    g = Grid(lengths=(20.0,), counts=(21,))
    res = run(p, g, t_end=20.0, dt=1e-2, ic_kind="sinusoidal", snapshot_every=100)
    _, verdict = lyapunov_monitor(res)
    assert verdict == "inconsistent"


def test_convergence_metrics_sine_tail():
    t = np.linspace(0.0, 400.0, 40001)
    u = 3.0 + np.sin(t)
    v = np.full_like(t, 10.0)
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0)
    final_error, tail_amplitude = convergence_metrics(u, v, p)
    assert tail_amplitude == pytest.approx(2.0, abs=1e-3)
    # last sample is (3 + sin(400), 10)
    expect_err = abs(math.sin(400.0)) / math.hypot(3.0, 10.0)
    assert final_error == pytest.approx(expect_err, rel=1e-12)


def test_convergence_metrics_exact_equilibrium():
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0)
    u = np.full(100, 3.0)
    v = np.full(100, 10.0)
    assert convergence_metrics(u, v, p) == (0.0, 0.0)


def test_pattern_metrics_single_mode_variance():
    g = Grid(lengths=(10.0, 10.0), counts=(65, 65))
    xs = g.axes()[0]
    field = np.cos(math.pi * xs / 10.0)[:, None] * np.ones((1, 65))
    st = FieldState(t=0.0, u=3.0 + field, v=np.full(g.shape, 10.0))
    pm = pattern_metrics(st)
    # mean of cos^2 over the interval is 1/2; sampled version is close
    assert pm.u.variance == pytest.approx(0.5, abs=0.02)
    assert pm.u.minimum == pytest.approx(2.0, abs=1e-12)
    assert pm.u.maximum == pytest.approx(4.0, abs=1e-12)
    assert pm.v.variance == 0.0


def test_pattern_metrics_counts_isolated_bumps():
    # peaks sit exactly on grid nodes so each is a strict 8-neighbor
    # maximum; a peak centered between nodes ties its neighbors and
    # deliberately does not count
    g = Grid(lengths=(10.0, 10.0), counts=(51, 51))
    xs, ys = g.axes()
    xx = xs[:, None]
    yy = ys[None, :]
    field = np.zeros(g.shape)
    centers = [(2.4, 2.4), (7.6, 2.4), (5.0, 7.6)]
    for cx, cy in centers:
        field += np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / 0.5)
    st = FieldState(t=1.5, u=3.0 + field, v=10.0 - field)
    pm = pattern_metrics(st)
    assert pm.t == 1.5
    assert pm.u.extrema == 3
    assert pm.u.maximum == pytest.approx(4.0, abs=1e-6)
    assert isinstance(pm.u, FieldStats)


def test_pattern_metrics_rejects_1d():
    g = Grid(lengths=(10.0,), counts=(11,))
    st = FieldState(t=0.0, u=np.zeros(11), v=np.zeros(11))
    with pytest.raises(ValueError):
        pattern_metrics(st)
