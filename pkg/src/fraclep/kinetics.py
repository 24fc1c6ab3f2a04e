"""Lengyel-Epstein reaction kinetics and pointwise structure.

The two-variable model for the chlorite-iodide-malonic-acid system:

    du/dt ~ F(u, v) = a - u - 4 u v / (1 + u^2)
    dv/dt ~ G(u, v) = sigma * b * (u - u v / (1 + u^2))

with feed parameter a, rate parameter b and rescaling factor sigma, all
strictly positive.  Everything here is pure algebra at a point: fixed
point, linearization, the invariant rectangle and the feed-ratio function
used by the global-stability criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fractional import validate_order

__all__ = [
    "SystemParams",
    "Equilibrium",
    "InvariantRectangle",
    "JacobianSummary",
    "InternalConsistencyError",
    "reaction_rates",
    "equilibrium",
    "invariant_rectangle",
    "jacobian_summary",
    "saturating_uptake",
    "feed_ratio",
    "feed_ratio_decreasing",
]


class InternalConsistencyError(RuntimeError):
    """A sampled algebraic identity failed; the kinetics code is wrong."""


@dataclass(frozen=True)
class SystemParams:
    """Model parameters: kinetics (a, b, sigma), diffusivities, order."""

    a: float
    b: float
    sigma: float
    d1: float
    d2: float
    delta: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "sigma", "d1", "d2"):
            value = float(getattr(self, name))
            if not value > 0:
                raise ValueError(f"parameter {name} must be positive, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "delta", validate_order(self.delta))

    @property
    def alpha(self) -> float:
        """Equilibrium activator level a/5."""
        return self.a / 5.0


@dataclass(frozen=True)
class Equilibrium:
    u_star: float
    v_star: float


@dataclass(frozen=True)
class InvariantRectangle:
    """Open box (0, u_max) x (0, v_max) that trajectories cannot leave."""

    u_max: float
    v_max: float


@dataclass(frozen=True)
class JacobianSummary:
    """Linearization at the equilibrium.

    ``gu`` and ``gv`` are the inhibitor-equation derivatives with the
    sigma factor split off (they carry b only); the actual Jacobian is
    [[fu, fv], [sigma*gu, sigma*gv]], hence trace = fu + sigma*gv and
    det = 5*sigma*b*alpha/(alpha^2+1).  ``discriminant`` is
    trace^2 - 4*det.
    """

    fu: float
    fv: float
    gu: float
    gv: float
    trace: float
    det: float
    discriminant: float


def reaction_rates(u, v, p: SystemParams):
    """Pointwise reaction terms (F, G); accepts scalars or arrays."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    hill = u * v / (1.0 + u * u)
    f = p.a - u - 4.0 * hill
    g = p.sigma * p.b * (u - hill)
    return f, g


def equilibrium(p: SystemParams) -> Equilibrium:
    """Unique positive fixed point (alpha, 1 + alpha^2) with alpha = a/5."""
    alpha = p.alpha
    return Equilibrium(u_star=alpha, v_star=1.0 + alpha * alpha)


def invariant_rectangle(p: SystemParams, samples: int = 1000) -> InvariantRectangle:
    """Invariant box (0, a) x (0, 1 + a^2), with sampled flux-sign checks.

    On each face the outward flux must be nonpositive: F(0, v) >= 0,
    F(a, v) <= 0, G(u, 0) >= 0, G(u, 1 + a^2) <= 0 for interior face
    points.  A violation cannot come from bad parameters (any positive
    set works), so it is raised as an internal consistency error.
    """
    if samples < 1:
        raise ValueError("need at least one sample per face")
    box = InvariantRectangle(u_max=p.a, v_max=1.0 + p.a * p.a)
    # strictly interior face samples; the sign conditions are strict there
    uu = box.u_max * (np.arange(samples) + 0.5) / samples
    vv = box.v_max * (np.arange(samples) + 0.5) / samples
    tol = -1e-12 * max(1.0, p.a, p.sigma * p.b * box.v_max)
    f_left, _ = reaction_rates(np.zeros_like(vv), vv, p)
    f_right, _ = reaction_rates(np.full_like(vv, box.u_max), vv, p)
    _, g_bottom = reaction_rates(uu, np.zeros_like(uu), p)
    _, g_top = reaction_rates(uu, np.full_like(uu, box.v_max), p)
    checks = (
        ("F(0, v) >= 0", float(np.min(f_left))),
        ("F(u_max, v) <= 0", float(np.min(-f_right))),
        ("G(u, 0) >= 0", float(np.min(g_bottom))),
        ("G(u, v_max) <= 0", float(np.min(-g_top))),
    )
    for label, worst in checks:
        if worst < tol:
            raise InternalConsistencyError(
                f"invariant-box flux condition {label} violated by {worst!r}"
            )
    return box


def jacobian_summary(p: SystemParams) -> JacobianSummary:
    """Closed-form linearization at the equilibrium point."""
    alpha = p.alpha
    denom = 1.0 + alpha * alpha
    fu = (3.0 * alpha * alpha - 5.0) / denom
    fv = -4.0 * alpha / denom
    gu = 2.0 * p.b * alpha * alpha / denom
    gv = -p.b * alpha / denom
    trace = fu + p.sigma * gv
    det = 5.0 * p.sigma * p.b * alpha / denom
    return JacobianSummary(
        fu=fu,
        fv=fv,
        gu=gu,
        gv=gv,
        trace=trace,
        det=det,
        discriminant=trace * trace - 4.0 * det,
    )


def saturating_uptake(u):
    """Saturating uptake rate u / (1 + u^2) shared by both reactions."""
    u = np.asarray(u, dtype=np.float64)
    return u / (1.0 + u * u)


def feed_ratio(u, p: SystemParams):
    """Net feed over uptake, (a - u) * (1 + u^2) / u, for u in (0, a).

    Equals 4*v along the u-nullcline; its strict monotonicity on (0, a)
    is exactly the condition under which the equilibrium is globally
    stable (it holds iff a^2 <= 27).  Pole at u = 0 is a domain error.
    """
    u = np.asarray(u, dtype=np.float64)
    if np.any(u <= 0):
        raise ValueError("feed_ratio requires u > 0")
    return (p.a - u) * (1.0 + u * u) / u


def _feed_ratio_slope(u: np.ndarray, a: float) -> np.ndarray:
    # d/du of a/u - 1 + a*u - u^2
    return -a / (u * u) + a - 2.0 * u


def feed_ratio_decreasing(p: SystemParams, samples: int = 1000) -> bool:
    """True iff the feed ratio strictly decreases across (0, a).

    Checks consecutive differences over a uniform interior sample and the
    analytic slope at the midpoints, so a non-monotone bump between nodes
    is still caught.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    u = p.a * (np.arange(samples) + 1.0) / (samples + 1.0)
    values = feed_ratio(u, p)
    mid = 0.5 * (u[:-1] + u[1:])
    return bool(np.all(np.diff(values) < 0) and np.all(_feed_ratio_slope(mid, p.a) < 0))
