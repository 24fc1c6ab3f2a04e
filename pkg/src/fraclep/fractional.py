"""Discrete Caputo-derivative machinery on uniform time grids.

The Caputo derivative of order ``delta`` in (0, 1] is approximated with the
classical L1 scheme: the integrand's derivative is taken piecewise constant
between nodes, which integrates the power-law kernel exactly and yields the
weights

    b_k = (k + 1)**(1 - delta) - k**(1 - delta),  k = 0, 1, ...

together with the prefactor ``dt**(-delta) / Gamma(2 - delta)``.  The scheme
is accurate of order ``2 - delta`` for smooth histories and degenerates to
the plain backward difference quotient at ``delta = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "gamma",
    "validate_order",
    "L1Weights",
    "l1_weights",
    "ScalarHistory",
    "caputo_l1",
    "caputo_l1_series",
    "caputo_power_rule",
    "square_rule_margins",
]


def gamma(x: float) -> float:
    """Euler gamma function for positive real arguments.

    Thin wrapper over the platform Lanczos-class implementation; relative
    error is a few ulps, far below the 1e-12 budget the analyzers need.
    Raises ``ValueError`` for ``x <= 0`` (poles and the reflection branch
    are never needed here).
    """
    if not x > 0:
        raise ValueError(f"gamma requires x > 0, got {x!r}")
    return math.gamma(x)


def validate_order(delta: float) -> float:
    """Check a fractional order lies in (0, 1] and return it as float."""
    delta = float(delta)
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"fractional order must lie in (0, 1], got {delta!r}")
    return delta


@dataclass(frozen=True)
class L1Weights:
    """L1 convolution weights for a fixed order, step and step count.

    ``b`` holds b_0 .. b_{n-1}; ``scale`` is dt**(-delta) / Gamma(2-delta).
    """

    delta: float
    dt: float
    b: np.ndarray
    scale: float

    @property
    def n(self) -> int:
        return len(self.b)


def l1_weights(delta: float, dt: float, n: int) -> L1Weights:
    """Build L1 weights for ``n`` steps of size ``dt`` at order ``delta``.

    The partial sums of ``b`` telescope to ``m**(1-delta)``; at delta = 1
    the weights collapse to (1, 0, 0, ...).
    """
    delta = validate_order(delta)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if n < 1:
        raise ValueError(f"need at least one step, got n={n!r}")
    k = np.arange(n + 1, dtype=np.float64)
    pk = k ** (1.0 - delta)
    pk[0] = 0.0  # 0**0 would be 1 at delta = 1; the limit wants 0 so b_0 = 1
    b = pk[1:] - pk[:-1]
    scale = dt ** (-delta) / math.gamma(2.0 - delta)
    return L1Weights(delta=delta, dt=float(dt), b=b, scale=scale)


@dataclass(frozen=True)
class ScalarHistory:
    """Samples of a scalar signal on the uniform grid t_j = j * dt."""

    samples: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or len(samples) < 1:
            raise ValueError("history must be a nonempty 1D sample array")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dt", float(self.dt))

    def __len__(self) -> int:
        return len(self.samples)


def caputo_l1(history: ScalarHistory, weights: L1Weights) -> float:
    """L1 value of the Caputo derivative at the latest history node.

    ``history`` must hold n+1 samples where ``weights`` was built for n
    steps of the same dt; mismatches are usage errors.
    """
    f = history.samples
    n = len(f) - 1
    if n < 1:
        raise ValueError("need at least two samples to difference")
    if n != weights.n or history.dt != weights.dt:
        raise ValueError(
            f"weights built for n={weights.n}, dt={weights.dt}; "
            f"history has n={n}, dt={history.dt}"
        )
    if weights.delta == 1.0:
        # exact degeneration to the backward difference quotient
        return float((f[-1] - f[-2]) / weights.dt)
    diffs = f[1:] - f[:-1]
    return float(weights.scale * np.dot(weights.b[::-1], diffs))


def caputo_l1_series(samples: np.ndarray, delta: float, dt: float) -> np.ndarray:
    """L1 Caputo derivative at every interior node t_1 .. t_N at once.

    The per-node sums form a discrete convolution of the first differences
    with the weight sequence, so the whole series costs one convolution.
    """
    f = np.asarray(samples, dtype=np.float64)
    if f.ndim != 1 or len(f) < 2:
        raise ValueError("need at least two samples")
    n = len(f) - 1
    w = l1_weights(delta, dt, n)
    diffs = f[1:] - f[:-1]
    if w.delta == 1.0:
        return diffs / w.dt
    return w.scale * np.convolve(diffs, w.b)[:n]


def caputo_power_rule(p: float, delta: float, t: float) -> float:
    """Exact Caputo derivative of t**p: Gamma(p+1)/Gamma(p+1-delta) * t**(p-delta).

    Restricted to p >= 1 so the derivative stays bounded at t = 0.
    """
    delta = validate_order(delta)
    if not p >= 1:
        raise ValueError(f"power rule implemented for p >= 1, got {p!r}")
    if not t > 0:
        raise ValueError(f"evaluation point must be positive, got {t!r}")
    return gamma(p + 1.0) / gamma(p + 1.0 - delta) * t ** (p - delta)


def square_rule_margins(history: ScalarHistory, delta: float) -> np.ndarray:
    """Margins of the chain-rule inequality for squares under Caputo.

    For differentiable f the Caputo derivative satisfies
    ``D(f^2) <= 2 f D(f)``; the returned array holds
    ``2 f_n D(f)_n - D(f^2)_n`` at every interior node, computed with the
    same L1 discretization on both sides.  Nonnegative margins (up to
    roundoff) certify that the discrete scheme inherits the inequality.
    """
    f = history.samples
    if len(f) < 2:
        raise ValueError("need at least two samples")
    df = caputo_l1_series(f, delta, history.dt)
    df2 = caputo_l1_series(f * f, delta, history.dt)
    return 2.0 * f[1:] * df - df2
