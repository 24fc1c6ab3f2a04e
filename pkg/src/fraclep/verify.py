"""Built-in oracle suite behind the `verify` command.

Every item recomputes an expected value through an independent route
(closed-form calculus, finite differences, bisection, or a separately
coded stepper) and compares the production code against it.  Items
return (passed, detail) so the CLI can print one line per check.
"""

from __future__ import annotations

import math

import numpy as np

from . import kinetics
from .fractional import ScalarHistory, caputo_l1, caputo_power_rule, l1_weights, square_rule_margins
from .reference import reference_imex_run
from .solver import Grid, make_ic, run
from .stability import turing_band

__all__ = ["VERIFY_ITEMS", "run_verify"]


def _power_rule_error(dt: float) -> float:
    n = int(round(1.0 / dt))
    t = dt * np.arange(n + 1)
    hist = ScalarHistory(samples=t**2, dt=dt)
    approx = caputo_l1(hist, l1_weights(0.5, dt, n))
    exact = caputo_power_rule(2.0, 0.5, 1.0)
    return abs(approx - exact) / abs(exact)


def check_power_rule_value() -> tuple[bool, str]:
    err = _power_rule_error(1e-3)
    return err < 1e-2, f"relative error {err:.3e} at dt=1e-3 (tolerance 1e-2)"


def check_power_rule_order() -> tuple[bool, str]:
    coarse = _power_rule_error(2e-3)
    fine = _power_rule_error(1e-3)
    ratio = coarse / fine
    return ratio >= 2**1.4, f"error ratio {ratio:.3f} on dt halving (need >= {2**1.4:.3f})"


def check_square_rule() -> tuple[bool, str]:
    dt = 2e-3
    t = dt * np.arange(int(round(2.0 / dt)) + 1)
    functions = {
        "constant": np.full_like(t, 2.5),
        "linear": t.copy(),
        "quadratic": t**2,
        "decay": np.exp(-t),
        "sine": np.sin(t),
    }
    worst = math.inf
    for samples in functions.values():
        for delta in (0.3, 0.5, 0.7, 0.9):
            margins = square_rule_margins(ScalarHistory(samples, dt), delta)
            worst = min(worst, float(margins.min()))
    return worst >= -1e-8, f"worst square-rule margin {worst:.3e} (floor -1e-8)"


_PARAM_SETS = (
    kinetics.SystemParams(a=15, b=1, sigma=7, d1=1, d2=10, delta=1.0),
    kinetics.SystemParams(a=15, b=1.2, sigma=8, d1=1, d2=24, delta=1.0),
    kinetics.SystemParams(a=4, b=1, sigma=2, d1=1, d2=1, delta=0.9),
    kinetics.SystemParams(a=7.3, b=0.4, sigma=3.1, d1=0.7, d2=5.5, delta=0.6),
)


def check_equilibrium() -> tuple[bool, str]:
    eq15 = kinetics.equilibrium(_PARAM_SETS[0])
    if (eq15.u_star, eq15.v_star) != (3.0, 10.0):
        return False, f"equilibrium for a=15 came out {eq15!r}, expected (3, 10)"
    worst = 0.0
    for p in _PARAM_SETS:
        eq = kinetics.equilibrium(p)
        f, g = kinetics.reaction_rates(eq.u_star, eq.v_star, p)
        scale = max(1.0, p.a, p.sigma * p.b * p.a)
        worst = max(worst, abs(float(f)) / scale, abs(float(g)) / scale)
    return worst < 1e-12, f"worst scaled residual at equilibria {worst:.3e}"


def _fd_jacobian(p: kinetics.SystemParams, h: float = 1e-6) -> np.ndarray:
    eq = kinetics.equilibrium(p)
    u, v = eq.u_star, eq.v_star

    def rates(uu, vv):
        f, g = kinetics.reaction_rates(uu, vv, p)
        return np.array([float(f), float(g)])

    return np.column_stack([
        (rates(u + h, v) - rates(u - h, v)) / (2 * h),
        (rates(u, v + h) - rates(u, v - h)) / (2 * h),
    ])


def check_jacobian_fd() -> tuple[bool, str]:
    worst = 0.0
    for p in _PARAM_SETS:
        js = kinetics.jacobian_summary(p)
        fd = _fd_jacobian(p)
        closed = np.array([
            [js.fu, js.fv],
            [p.sigma * js.gu, p.sigma * js.gv],
        ])
        worst = max(worst, float(np.max(np.abs(fd - closed))))
        worst = max(worst, abs((fd[0, 0] + fd[1, 1]) - js.trace))
        worst = max(worst, abs(np.linalg.det(fd) - js.det))
    return worst < 1e-6, f"worst |finite-difference - closed-form| {worst:.3e}"


def _mode_det_direct(p: kinetics.SystemParams, lam: float) -> float:
    js = kinetics.jacobian_summary(p)
    m = np.array([
        [js.fu - p.d1 * lam, js.fv],
        [p.sigma * js.gu, p.sigma * js.gv - p.d2 * lam],
    ])
    return float(np.linalg.det(m))


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_turing_band_bisection() -> tuple[bool, str]:
    p = _PARAM_SETS[1]  # (15, 1.2, 8, 1, 24)
    band = turing_band(p)
    if band is None:
        return False, "expected a nonempty band for (15, 1.2, 8, 1, 24)"
    det = lambda lam: _mode_det_direct(p, lam)
    grid = np.linspace(1e-9, 5.0, 2001)
    vals = [det(x) for x in grid]
    crossings = [
        _bisect(det, grid[i], grid[i + 1])
        for i in range(len(grid) - 1)
        if (vals[i] < 0) != (vals[i + 1] < 0)
    ]
    if len(crossings) != 2:
        return False, f"bisection found {len(crossings)} det sign changes, expected 2"
    err = max(abs(crossings[0] - band[0]), abs(crossings[1] - band[1]))
    empty_ok = turing_band(_PARAM_SETS[0]) is None
    return (err <= 1e-9 and empty_ok), (
        f"band endpoints agree to {err:.2e}; empty band for (15,1,7,1,10): {empty_ok}"
    )


def check_delta1_degeneration() -> tuple[bool, str]:
    p = _PARAM_SETS[0]
    grid = Grid(lengths=(20.0,), counts=(41,))
    dt, n_steps = 1e-3, 300
    state0 = make_ic("sinusoidal", grid, p)
    result = run(p, grid, t_end=n_steps * dt, dt=dt, initial=state0, snapshot_every=1)
    _, u_ref, v_ref = reference_imex_run(p, grid, state0, dt, n_steps)
    worst = 0.0
    for k, snap in zip(result.snapshot_steps, result.snapshots):
        du = np.max(np.abs(snap.u - u_ref[k])) / max(1.0, np.max(np.abs(u_ref[k])))
        dv = np.max(np.abs(snap.v - v_ref[k])) / max(1.0, np.max(np.abs(v_ref[k])))
        worst = max(worst, du, dv)
    return worst <= 1e-9, f"worst per-step relative gap vs reference {worst:.3e}"


VERIFY_ITEMS = (
    ("power-rule value", check_power_rule_value),
    ("power-rule order", check_power_rule_order),
    ("square-rule margins", check_square_rule),
    ("equilibrium fixed point", check_equilibrium),
    ("jacobian vs finite differences", check_jacobian_fd),
    ("turing band vs bisection", check_turing_band_bisection),
    ("delta=1 degeneration", check_delta1_degeneration),
)


def run_verify(emit=print) -> bool:
    """Run every self-check; returns True iff all passed."""
    all_ok = True
    for name, fn in VERIFY_ITEMS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        emit(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
