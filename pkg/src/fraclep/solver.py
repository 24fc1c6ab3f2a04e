"""Time-fractional IMEX integrator on no-flux grids.

Each step solves, per field,

    (I - mu * d * Lap_h) w_{n+1} = w_n - sum_{k=1}^{n} b_k (w_{n-k+1} - w_{n-k})
                                   + mu * R(u_n, v_n)

with mu = Gamma(2 - delta) * dt**delta: diffusion implicit, reaction
explicit, and the L1 memory term folded into the right-hand side.  The
Laplacian uses ghost reflection (mirror) nodes, so discrete cosines are
exact eigenvectors.  1D systems are solved by direct banded elimination,
2D by conjugate gradients on a trapezoid-weight symmetrization.  States
are never clipped; staying inside the invariant rectangle is a tested
property of the scheme, not an enforcement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import csr_matrix, diags, identity, kron
from scipy.sparse.linalg import cg

from .fractional import L1Weights, l1_weights
from .kinetics import SystemParams, equilibrium, reaction_rates

__all__ = [
    "Grid",
    "FieldState",
    "L1FieldHistory",
    "SolverError",
    "NonFiniteStateError",
    "laplacian",
    "make_ic",
    "step",
    "run",
    "RunResult",
]

IC_KINDS = ("uniform", "sinusoidal", "random-perturbation")


class SolverError(RuntimeError):
    """Linear-solve or time-stepping failure, with step context."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class NonFiniteStateError(SolverError):
    """A field picked up a NaN or infinity at the given step."""


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on [0, L1] (x [0, L2]) including both endpoints."""

    lengths: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        lengths = tuple(float(x) for x in np.atleast_1d(self.lengths))
        counts = tuple(int(n) for n in np.atleast_1d(self.counts))
        if len(lengths) not in (1, 2) or len(lengths) != len(counts):
            raise ValueError("grid must be 1D or 2D with one count per axis")
        if any(not x > 0 for x in lengths):
            raise ValueError(f"lengths must be positive, got {lengths!r}")
        if any(n < 3 for n in counts):
            raise ValueError(f"need at least 3 nodes per axis, got {counts!r}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "counts", counts)

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / (n - 1) for L, n in zip(self.lengths, self.counts))

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.linspace(0.0, L, n) for L, n in zip(self.lengths, self.counts)
        )

    def nearest_index(self, coords) -> tuple[int, ...]:
        coords = np.atleast_1d(np.asarray(coords, dtype=np.float64))
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {coords!r}")
        idx = []
        for x, L, n, h in zip(coords, self.lengths, self.counts, self.spacing):
            if not 0.0 <= x <= L:
                raise ValueError(f"probe coordinate {x!r} outside [0, {L}]")
            idx.append(int(min(n - 1, max(0, round(x / h)))))
        return tuple(idx)


@dataclass
class FieldState:
    """Both concentration fields at one time level."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(t=self.t, u=self.u.copy(), v=self.v.copy())


def laplacian(field: np.ndarray, grid: Grid) -> np.ndarray:
    """Second-order Laplacian with mirror (zero-flux) boundary nodes.

    The ghost value equals the first interior value, so boundary rows
    become 2*(neighbor - center)/h^2 and sampled Neumann cosines are
    exact eigenvectors of the stencil.
    """
    f = np.asarray(field, dtype=np.float64)
    if f.shape != grid.shape:
        raise ValueError(f"field shape {f.shape} does not match grid {grid.shape}")
    padded = np.pad(f, 1, mode="reflect")
    h = grid.spacing
    if grid.dim == 1:
        return (padded[:-2] - 2.0 * f + padded[2:]) / h[0] ** 2
    core_x = (padded[:-2, 1:-1] - 2.0 * f + padded[2:, 1:-1]) / h[0] ** 2
    core_y = (padded[1:-1, :-2] - 2.0 * f + padded[1:-1, 2:]) / h[1] ** 2
    return core_x + core_y


def make_ic(
    kind: str,
    grid: Grid,
    p: SystemParams,
    seed: int = 0,
    u0: float | None = None,
    v0: float | None = None,
) -> FieldState:
    """Build one of the named initial conditions.

    uniform: constant fields, defaulting to the equilibrium point.
    sinusoidal: u = 1 + 0.3 sin(x/2), v = 2 + 0.6 sin(x/2) along axis 0.
    random-perturbation: 20 percent relative Gaussian noise around
    (3.5, 10.5), drawn per node from a counter-based (Philox) generator,
    so the fields are a pure function of (seed, shape).
    """
    if kind == "uniform":
        eq = equilibrium(p)
        uval = eq.u_star if u0 is None else float(u0)
        vval = eq.v_star if v0 is None else float(v0)
        u = np.full(grid.shape, uval, dtype=np.float64)
        v = np.full(grid.shape, vval, dtype=np.float64)
    elif kind == "sinusoidal":
        x = grid.axes()[0]
        if grid.dim == 2:
            x = x[:, None] + np.zeros((1, grid.counts[1]))
        u = 1.0 + 0.3 * np.sin(x / 2.0)
        v = 2.0 + 0.6 * np.sin(x / 2.0)
        u = np.ascontiguousarray(np.broadcast_to(u, grid.shape), dtype=np.float64)
        v = np.ascontiguousarray(np.broadcast_to(v, grid.shape), dtype=np.float64)
    elif kind == "random-perturbation":
        gen = np.random.Generator(np.random.Philox(key=int(seed)))
        wu = gen.standard_normal(grid.shape)
        wv = gen.standard_normal(grid.shape)
        u = 3.5 * (1.0 + 0.2 * wu)
        v = 10.5 * (1.0 + 0.2 * wv)
    else:
        raise ValueError(f"unknown IC kind {kind!r}; expected one of {IC_KINDS}")
    return FieldState(t=0.0, u=u, v=v)


class L1FieldHistory:
    """Ring buffer of first differences backing the L1 memory term.

    Holds the current levels of both fields plus the last `depth` level
    differences, flattened.  ``window`` truncates the memory (explicit
    opt-in, documented accuracy loss); at delta = 1 all weights past b_0
    vanish exactly, so the ring shrinks to depth 1 with no change in the
    computed trajectory.
    """

    def __init__(
        self,
        initial: FieldState,
        weights: L1Weights,
        window: int | None = None,
    ):
        if window is not None and window < 1:
            raise ValueError(f"memory window must be >= 1, got {window!r}")
        self.weights = weights
        self.window = window
        self.t = float(initial.t)
        self.u = np.array(initial.u, dtype=np.float64)
        self.v = np.array(initial.v, dtype=np.float64)
        if self.u.shape != self.v.shape:
            raise ValueError("u and v must share a shape")
        depth = max(1, weights.n - 1)
        if window is not None:
            depth = min(depth, window)
        if weights.delta == 1.0:
            depth = 1  # b_k = 0 exactly for k >= 1
        self.depth = depth
        size = self.u.size
        self._du = np.zeros((depth, size), dtype=np.float64)
        self._dv = np.zeros((depth, size), dtype=np.float64)
        # coefficients for a full ring, oldest slot ordering: [b_depth ... b_1]
        b = weights.b
        self._brev = b[1 : depth + 1][::-1].copy()
        if len(self._brev) < depth:  # delta = 1 with a single-step run
            self._brev = np.zeros(depth, dtype=np.float64)
        self.n = 0  # completed steps == stored differences (capped by depth)

    @property
    def level_count(self) -> int:
        return self.n + 1

    def _memory_sum(self, ring: np.ndarray) -> np.ndarray:
        depth, brev, n = self.depth, self._brev, self.n
        if n == 0:
            return np.zeros(ring.shape[1], dtype=np.float64)
        if n < depth:
            return brev[depth - n :] @ ring[:n]
        head = n % depth
        return brev[depth - head :] @ ring[:head] + brev[: depth - head] @ ring[head:]

    def memory_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened sum_k b_k * (level difference k steps back) per field."""
        return self._memory_sum(self._du), self._memory_sum(self._dv)

    def append(self, u_new: np.ndarray, v_new: np.ndarray, t_new: float) -> None:
        slot = self.n % self.depth
        np.subtract(u_new.ravel(), self.u.ravel(), out=self._du[slot])
        np.subtract(v_new.ravel(), self.v.ravel(), out=self._dv[slot])
        self.u = u_new
        self.v = v_new
        self.t = t_new
        self.n += 1


def _check_cg_residual(result, rhs, weights_vec, matrix, step_note):
    x, info = result
    if info != 0:
        raise SolverError(
            f"conjugate gradients failed (info={info}) {step_note}", step=None
        )
    # residual of the ORIGINAL system: A x = (S x) / w elementwise
    resid = rhs - (matrix @ x) / weights_vec
    target = 1e-10 * max(1.0, float(np.linalg.norm(rhs)))
    norm = float(np.linalg.norm(resid))
    if norm > target:
        raise SolverError(
            f"residual {norm:.3e} above target {target:.3e} {step_note}", step=None
        )
    return x


def _trapezoid_axis(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


@lru_cache(maxsize=32)
def _diffusion_solver(grid: Grid, mu_d: float):
    """Factory for x -> (I - mu_d * Lap_h)^{-1} rhs on the given grid.

    1D: banded direct elimination.  2D: CG on the trapezoid-weighted
    symmetrization (boundary rows halved, corners quartered), verified
    against the unweighted residual.  Cached per (grid, mu_d) so repeated
    steps reuse the assembly.
    """
    if grid.dim == 1:
        n = grid.counts[0]
        r = mu_d / grid.spacing[0] ** 2
        ab = np.zeros((3, n))
        ab[1, :] = 1.0 + 2.0 * r
        ab[0, 1:] = -r
        ab[0, 1] = -2.0 * r
        ab[2, :-1] = -r
        ab[2, n - 2] = -2.0 * r

        def solve(rhs: np.ndarray, x0: np.ndarray) -> np.ndarray:
            return solve_banded((1, 1), ab, rhs)

        return solve

    nx, ny = grid.counts
    hx, hy = grid.spacing

    def mirror_lap(n: int, h: float) -> csr_matrix:
        main = np.full(n, -2.0)
        off = np.ones(n - 1)
        lap = diags([off, main, off], [-1, 0, 1], format="lil")
        lap[0, 1] = 2.0
        lap[n - 1, n - 2] = 2.0
        return csr_matrix(lap) / h**2

    lap_x = mirror_lap(nx, hx)
    lap_y = mirror_lap(ny, hy)
    ident_x = identity(nx, format="csr")
    ident_y = identity(ny, format="csr")
    operator = identity(nx * ny, format="csr") - mu_d * (
        kron(lap_x, ident_y, format="csr") + kron(ident_x, lap_y, format="csr")
    )
    wvec = np.outer(_trapezoid_axis(nx), _trapezoid_axis(ny)).ravel()
    sym = csr_matrix(diags(wvec) @ operator)

    def solve(rhs: np.ndarray, x0: np.ndarray) -> np.ndarray:
        target = 1e-10 * max(1.0, float(np.linalg.norm(rhs)))
        result = cg(
            sym,
            wvec * rhs,
            x0=x0,
            rtol=0.0,
            atol=0.25 * target,
            maxiter=1000,
        )
        return _check_cg_residual(result, rhs, wvec, sym, "in 2D diffusion solve")

    return solve


def _mu(weights: L1Weights) -> float:
    # Gamma(2 - delta) * dt**delta; == dt exactly at delta = 1
    return math.gamma(2.0 - weights.delta) * weights.dt**weights.delta


def step(history: L1FieldHistory, p: SystemParams, grid: Grid, dt: float) -> FieldState:
    """Advance both fields one level; mutates ``history`` and returns the state."""
    w = history.weights
    if dt != w.dt:
        raise ValueError(f"dt {dt!r} does not match the weights' dt {w.dt!r}")
    if history.n >= w.n:
        raise SolverError(
            f"history exhausted: weights were built for {w.n} steps", step=history.n
        )
    if history.u.shape != grid.shape:
        raise ValueError("history fields do not match the grid shape")
    mu = _mu(w)
    rate_u, rate_v = reaction_rates(history.u, history.v, p)
    mem_u, mem_v = history.memory_terms()
    rhs_u = history.u.ravel() - mem_u + mu * rate_u.ravel()
    rhs_v = history.v.ravel() - mem_v + mu * rate_v.ravel()
    # overflow in the explicit reaction term surfaces here, before the
    # linear solver rejects the right-hand side with a foreign error
    if not (np.all(np.isfinite(rhs_u)) and np.all(np.isfinite(rhs_v))):
        raise NonFiniteStateError(
            f"non-finite right-hand side at step {history.n + 1}",
            step=history.n + 1,
        )
    solve_u = _diffusion_solver(grid, mu * p.d1)
    solve_v = _diffusion_solver(grid, mu * p.d2)
    new_u = solve_u(rhs_u, history.u.ravel()).reshape(grid.shape)
    new_v = solve_v(rhs_v, history.v.ravel()).reshape(grid.shape)
    t_new = history.t + dt
    history.append(new_u, new_v, t_new)
    return FieldState(t=t_new, u=new_u, v=new_v)


@dataclass
class RunResult:
    """Trajectory artifacts: snapshots plus dense probe series."""

    grid: Grid
    params: SystemParams
    dt: float
    n_steps: int
    snapshots: tuple[FieldState, ...]
    snapshot_steps: tuple[int, ...]
    probe_indices: tuple[tuple[int, ...], ...]
    probe_coords: tuple[tuple[float, ...], ...]
    probe_t: np.ndarray
    probe_u: np.ndarray  # shape (n_probes, n_steps + 1)
    probe_v: np.ndarray

    def probe_series(self, i: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.probe_t, self.probe_u[i], self.probe_v[i]


def run(
    p: SystemParams,
    grid: Grid,
    t_end: float,
    dt: float,
    ic_kind: str = "uniform",
    seed: int = 0,
    ic_u0: float | None = None,
    ic_v0: float | None = None,
    snapshot_every: int = 1,
    probes=None,
    memory_window: int | None = None,
    initial: FieldState | None = None,
) -> RunResult:
    """Integrate from t=0 to t_end, recording snapshots and probe series.

    ``initial`` overrides the named IC kinds with explicit arrays.  The
    run aborts with ``NonFiniteStateError`` (carrying the step index) as
    soon as either field stops being finite.  Identical arguments produce
    bit-identical trajectories.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    n_steps = int(round(t_end / dt))
    if n_steps < 1 or abs(n_steps * dt - t_end) > 1e-6 * max(1.0, abs(t_end)):
        raise ValueError(
            f"t_end={t_end!r} must be a positive integer multiple of dt={dt!r}"
        )
    if snapshot_every < 1:
        raise ValueError("snapshot_every must be >= 1")
    if initial is not None:
        state0 = FieldState(
            t=0.0,
            u=np.array(initial.u, dtype=np.float64),
            v=np.array(initial.v, dtype=np.float64),
        )
        if state0.u.shape != grid.shape or state0.v.shape != grid.shape:
            raise ValueError("explicit IC arrays do not match the grid shape")
    else:
        state0 = make_ic(ic_kind, grid, p, seed=seed, u0=ic_u0, v0=ic_v0)

    if probes is None:
        probes = [tuple(L / 2.0 for L in grid.lengths)]
    probe_indices = tuple(grid.nearest_index(c) for c in probes)
    axes = grid.axes()
    probe_coords = tuple(
        tuple(axes[d][i] for d, i in enumerate(idx)) for idx in probe_indices
    )

    weights = l1_weights(p.delta, dt, n_steps)
    history = L1FieldHistory(state0, weights, window=memory_window)

    n_probes = len(probe_indices)
    probe_u = np.empty((n_probes, n_steps + 1))
    probe_v = np.empty((n_probes, n_steps + 1))
    for j, idx in enumerate(probe_indices):
        probe_u[j, 0] = state0.u[idx]
        probe_v[j, 0] = state0.v[idx]

    snapshots = [state0.copy()]
    snapshot_steps = [0]
    for n in range(n_steps):
        state = step(history, p, grid, dt)
        k = n + 1
        if not (np.all(np.isfinite(state.u)) and np.all(np.isfinite(state.v))):
            raise NonFiniteStateError(
                f"non-finite field values at step {k} (t={state.t:.6g})", step=k
            )
        for j, idx in enumerate(probe_indices):
            probe_u[j, k] = state.u[idx]
            probe_v[j, k] = state.v[idx]
        if k % snapshot_every == 0 or k == n_steps:
            snapshots.append(state.copy())
            snapshot_steps.append(k)

    return RunResult(
        grid=grid,
        params=p,
        dt=dt,
        n_steps=n_steps,
        snapshots=tuple(snapshots),
        snapshot_steps=tuple(snapshot_steps),
        probe_indices=probe_indices,
        probe_coords=probe_coords,
        probe_t=dt * np.arange(n_steps + 1),
        probe_u=probe_u,
        probe_v=probe_v,
    )
