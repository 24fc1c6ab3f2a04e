"""Independent integer-order IMEX reference stepper (1D).

Backward-Euler diffusion with explicit reaction, written from scratch:
its own mirror-boundary tridiagonal assembly and its own Thomas
elimination, sharing no linear-algebra path with the production solver.
Exists so the delta = 1 degeneration of the L1 scheme can be checked
against a second, independently coded route.
"""

from __future__ import annotations

import numpy as np

from .kinetics import SystemParams, reaction_rates
from .solver import FieldState, Grid

__all__ = ["thomas_solve", "reference_imex_run"]


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system by sequential elimination.

    ``lower[i]`` multiplies x[i-1] in row i (lower[0] unused); ``upper[i]``
    multiplies x[i+1] (upper[-1] unused).
    """
    n = len(diag)
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = upper[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / denom if i < n - 1 else 0.0
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def reference_imex_run(
    p: SystemParams, grid: Grid, state0: FieldState, dt: float, n_steps: int
):
    """Integrate the integer-order system; returns (times, u_levels, v_levels).

    u_levels and v_levels have shape (n_steps + 1, nodes) with level 0 the
    initial condition.
    """
    if grid.dim != 1:
        raise ValueError("the reference stepper is 1D only")
    n = grid.counts[0]
    h = grid.spacing[0]

    def bands(d: float):
        r = dt * d / h**2
        lower = np.full(n, -r)
        upper = np.full(n, -r)
        diag = np.full(n, 1.0 + 2.0 * r)
        upper[0] = -2.0 * r  # ghost reflection at the left boundary node
        lower[-1] = -2.0 * r
        return lower, diag, upper

    bands_u = bands(p.d1)
    bands_v = bands(p.d2)
    u_levels = np.empty((n_steps + 1, n))
    v_levels = np.empty((n_steps + 1, n))
    u_levels[0] = np.asarray(state0.u, dtype=np.float64)
    v_levels[0] = np.asarray(state0.v, dtype=np.float64)
    for k in range(n_steps):
        f, g = reaction_rates(u_levels[k], v_levels[k], p)
        u_levels[k + 1] = thomas_solve(*bands_u, u_levels[k] + dt * f)
        v_levels[k + 1] = thomas_solve(*bands_v, v_levels[k] + dt * g)
    times = dt * np.arange(n_steps + 1)
    return times, u_levels, v_levels
