"""Local and spectral stability analysis for the fractional system.

Fractional orders change the stability criterion: a linear mode with
eigenvalue ``xi`` is stable iff ``|arg xi| > delta * pi / 2`` (the sector
condition), so an equilibrium that is unstable classically can be stable
for small enough order.  This module classifies the well-mixed (ODE)
equilibrium, scans the Neumann Laplacian spectrum mode by mode, locates
the diffusion-driven (Turing) band where a mode's determinant goes
negative, and assembles one report with an overall verdict.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .kinetics import SystemParams, JacobianSummary, jacobian_summary

__all__ = [
    "MARGINAL_TOL",
    "OdeVerdict",
    "OverallVerdict",
    "OdeClassification",
    "NeumannSpectrum",
    "ModeAnalysis",
    "StabilityReport",
    "matignon_margin",
    "ode_eigenvalues",
    "ode_classify",
    "critical_order",
    "neumann_eigenvalues",
    "mode_analysis",
    "turing_band",
    "discriminant_roots",
    "d2_mode_threshold",
    "pde_classify",
    "global_stability_condition",
]

# margins inside +-MARGINAL_TOL of zero are reported as marginal, not decided
MARGINAL_TOL = 1e-9


class OdeVerdict(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "MarginalAtGivenDelta"


class OverallVerdict(str, Enum):
    STABLE = "Stable"
    TURING = "TuringUnstable"
    OSCILLATORY = "OscillatoryUnstable"
    INDETERMINATE = "Indeterminate"


def matignon_margin(lam: complex, delta: float) -> float:
    """Sector-condition margin |arg lam| - delta*pi/2 (positive = stable)."""
    from .fractional import validate_order

    delta = validate_order(delta)
    lam = complex(lam)
    if lam == 0:
        raise ValueError("zero eigenvalue has no argument; margin undefined")
    return abs(cmath.phase(lam)) - delta * math.pi / 2.0


def ode_eigenvalues(p: SystemParams) -> tuple[complex, complex]:
    """Eigenvalue pair of the well-mixed linearization, minus branch first.

    Computed from trace and determinant in closed form; both real when the
    discriminant is nonnegative, a conjugate pair otherwise.
    """
    js = jacobian_summary(p)
    if js.discriminant >= 0:
        root = math.sqrt(js.discriminant)
        return (
            complex((js.trace - root) / 2.0),
            complex((js.trace + root) / 2.0),
        )
    root = math.sqrt(-js.discriminant)
    return (
        complex(js.trace / 2.0, -root / 2.0),
        complex(js.trace / 2.0, root / 2.0),
    )


@dataclass(frozen=True)
class OdeClassification:
    """Well-mixed verdict at the given order, with the case that decided it.

    ``critical_order`` is the order below which the equilibrium is stable:
    None when it is stable for every order in (0, 1], 0.0 when no order
    helps, 1.0 for the neutrally-stable trace-zero case.
    """

    verdict: OdeVerdict
    eigenvalues: tuple[complex, complex]
    critical_order: float | None
    case_tag: str
    margin: float


def _min_margin(eigs: tuple[complex, complex], delta: float) -> float:
    return min(matignon_margin(lam, delta) for lam in eigs)


def ode_classify(p: SystemParams) -> OdeClassification:
    """Classify the well-mixed equilibrium at order ``p.delta``.

    Real-eigenvalue cases are order-independent (the determinant is
    positive, so both roots share the trace's sign); complex cases hinge
    on the sector condition and produce a finite critical order exactly
    when the trace is positive.
    """
    js = jacobian_summary(p)
    eigs = ode_eigenvalues(p)
    crit = critical_order(p)
    if js.discriminant >= 0:
        shape = "repeated" if js.discriminant == 0 else "real"
    else:
        shape = "complex"
    sign = "zero" if js.trace == 0 else ("negative" if js.trace < 0 else "positive")
    tag = f"{shape}-eigenvalues, {sign}-trace"

    margin = _min_margin(eigs, p.delta)
    if margin > MARGINAL_TOL:
        verdict = OdeVerdict.STABLE
    elif margin < -MARGINAL_TOL:
        verdict = OdeVerdict.UNSTABLE
    else:
        verdict = OdeVerdict.MARGINAL
    return OdeClassification(
        verdict=verdict,
        eigenvalues=eigs,
        critical_order=crit,
        case_tag=tag,
        margin=margin,
    )


def critical_order(p: SystemParams) -> float | None:
    """Largest stable order: (2/pi)|arg lam| when the trace is positive
    with complex eigenvalues, 1.0 in the trace-zero case, None when stable
    for every order, 0.0 when unstable for every order."""
    js = jacobian_summary(p)
    if js.trace < 0:
        return None
    if js.discriminant >= 0:
        # real nonnegative-trace eigenvalues: det > 0 forces trace > 0 here
        return 0.0
    if js.trace == 0:
        return 1.0
    _, lam = ode_eigenvalues(p)
    return 2.0 / math.pi * abs(cmath.phase(lam))


@dataclass(frozen=True)
class NeumannSpectrum:
    """Leading Laplacian eigenvalues for a no-flux interval or rectangle."""

    lengths: tuple[float, ...]
    lambdas: np.ndarray


def neumann_eigenvalues(lengths, m: int) -> NeumannSpectrum:
    """First m+1 Neumann eigenvalues, ascending, starting at 0.

    1D interval of length L: (k*pi/L)^2.  2D rectangle: sums of the two
    axis sequences, sorted.  The m+1 smallest always satisfy per-axis
    index <= m, so an (m+1)x(m+1) candidate grid suffices in 2D.
    """
    if np.isscalar(lengths):
        lengths = (float(lengths),)
    lengths = tuple(float(x) for x in lengths)
    if len(lengths) not in (1, 2):
        raise ValueError("only 1D intervals and 2D rectangles are supported")
    if any(not x > 0 for x in lengths):
        raise ValueError(f"lengths must be positive, got {lengths!r}")
    if m < 0:
        raise ValueError("mode count must be nonnegative")
    k = np.arange(m + 1, dtype=np.float64)
    if len(lengths) == 1:
        lams = (k * math.pi / lengths[0]) ** 2
    else:
        ax = (k * math.pi / lengths[0]) ** 2
        ay = (k * math.pi / lengths[1]) ** 2
        lams = np.sort((ax[:, None] + ay[None, :]).ravel())[: m + 1]
    return NeumannSpectrum(lengths=lengths, lambdas=lams)


@dataclass(frozen=True)
class ModeAnalysis:
    """Per-mode linearization: J - diag(d1, d2) * lam and its verdict."""

    lap_eigenvalue: float
    trace: float
    det: float
    discriminant: float
    eigenvalues: tuple[complex, complex]
    margin: float
    stable: bool


def _coupling(p: SystemParams, js: JacobianSummary) -> float:
    # sigma*b*alpha/(1+alpha^2) = -sigma*gv = det/5; appears all over
    return -p.sigma * js.gv


def mode_analysis(p: SystemParams, lam: float) -> ModeAnalysis:
    """Stability of one spatial mode with Laplacian eigenvalue ``lam``.

    The mode matrix is [[fu - d1*lam, fv], [sigma*gu, sigma*gv - d2*lam]];
    its eigenvalue pair is tested against the sector condition at
    ``p.delta``.  A mode sitting exactly on a root (zero eigenvalue) gets
    margin 0 and counts as not stable.
    """
    lam = float(lam)
    if lam < 0:
        raise ValueError(f"Laplacian eigenvalues are nonnegative, got {lam!r}")
    js = jacobian_summary(p)
    c = _coupling(p, js)
    trace_i = js.trace - (p.d1 + p.d2) * lam
    det_i = (lam * p.d1 - js.fu) * lam * p.d2 + c * (lam * p.d1 + 5.0)
    disc_i = trace_i * trace_i - 4.0 * det_i
    if disc_i >= 0:
        root = math.sqrt(disc_i)
        eigs = (complex((trace_i - root) / 2.0), complex((trace_i + root) / 2.0))
    else:
        root = math.sqrt(-disc_i)
        eigs = (complex(trace_i / 2.0, -root / 2.0), complex(trace_i / 2.0, root / 2.0))
    margins = [
        0.0 if xi == 0 else matignon_margin(xi, p.delta) for xi in eigs
    ]
    margin = min(margins)
    return ModeAnalysis(
        lap_eigenvalue=lam,
        trace=trace_i,
        det=det_i,
        discriminant=disc_i,
        eigenvalues=eigs,
        margin=margin,
        stable=margin > MARGINAL_TOL,
    )


def turing_band(p: SystemParams) -> tuple[float, float] | None:
    """Interval of Laplacian eigenvalues where a mode's det goes negative.

    det_i(lam) is an upward parabola d1*d2*lam^2 + (c*d1 - fu*d2)*lam + 5c
    with positive product of roots, so the band is the root interval when
    the roots are real and positive, otherwise there is none.
    """
    js = jacobian_summary(p)
    c = _coupling(p, js)
    quad_a = p.d1 * p.d2
    quad_b = c * p.d1 - js.fu * p.d2
    quad_c = 5.0 * c
    disc = quad_b * quad_b - 4.0 * quad_a * quad_c
    if disc <= 0:
        return None
    root = math.sqrt(disc)
    lo = (-quad_b - root) / (2.0 * quad_a)
    hi = (-quad_b + root) / (2.0 * quad_a)
    if lo <= 0:
        # roots share their sign (product > 0); nonpositive means no band
        return None
    return (lo, hi)


def discriminant_roots(p: SystemParams) -> tuple[float, float] | None:
    """Roots of the per-mode discriminant as a function of the eigenvalue.

    Between them the mode eigenvalues are complex.  The reduced
    discriminant of this quadratic is strictly positive whenever
    d1 != d2, so the roots are real; equal diffusivities degenerate
    (the discriminant no longer depends on the mode) and return None.
    """
    if p.d1 == p.d2:
        return None
    js = jacobian_summary(p)
    diff = p.d1 - p.d2
    quad_a = diff * diff
    quad_b = 2.0 * diff * (-js.fu + p.sigma * js.gv)
    quad_c = js.discriminant
    disc = quad_b * quad_b - 4.0 * quad_a * quad_c
    if disc < 0:
        disc = 0.0  # provably nonnegative; clamp roundoff
    root = math.sqrt(disc)
    r1 = (-quad_b - root) / (2.0 * quad_a)
    r2 = (-quad_b + root) / (2.0 * quad_a)
    return (min(r1, r2), max(r1, r2))


def d2_mode_threshold(p: SystemParams, lam: float) -> float | None:
    """Inhibitor diffusivity at which this mode's det crosses zero.

    Solving det_i = 0 for d2 gives c*(lam*d1 + 5) / ((fu - lam*d1)*lam);
    only meaningful when the mode eigenvalue is positive and the
    activator term lam*d1 has not already absorbed the reaction gain fu.
    Excluded modes return None.
    """
    lam = float(lam)
    js = jacobian_summary(p)
    if lam <= 0 or lam * p.d1 >= js.fu:
        return None
    c = _coupling(p, js)
    return c * (lam * p.d1 + 5.0) / ((js.fu - lam * p.d1) * lam)


@dataclass(frozen=True)
class StabilityReport:
    """Everything the analyzer concluded for one parameter set + geometry."""

    params: SystemParams
    ode: OdeClassification
    modes: tuple[ModeAnalysis, ...]
    turing_band: tuple[float, float] | None
    discriminant_roots: tuple[float, float] | None
    d2_threshold: float | None
    overall: OverallVerdict
    notes: tuple[str, ...]


def _mode_cutoff(p: SystemParams, js: JacobianSummary, lambdas: np.ndarray) -> list[float]:
    """Keep eigenvalues up to (and including) the tail-dominance point.

    Beyond lam*min(d1,d2) > 10|fu| + 10 sigma |gv| diffusion dominates both
    the trace and the determinant, so further modes are provably stable.
    """
    threshold = 10.0 * abs(js.fu) + 10.0 * p.sigma * abs(js.gv)
    dmin = min(p.d1, p.d2)
    kept: list[float] = []
    for lam in lambdas:
        kept.append(float(lam))
        if lam * dmin > threshold:
            break
    return kept


def pde_classify(p: SystemParams, lengths, m: int = 128) -> StabilityReport:
    """Full spatial classification over the leading Neumann modes.

    Scans per-mode sector margins, locates the Turing band, evaluates the
    sufficient-condition shortcuts for unequal diffusivities, and reduces
    everything to one overall verdict.  A Stable verdict requires every
    analyzed mode to clear the sector condition and the spectrum tail to
    be provably stable (cutoff reached, or the remaining eigenvalues lie
    beyond both the band and the trace sign change).
    """
    js = jacobian_summary(p)
    spectrum = neumann_eigenvalues(lengths, m)
    kept = _mode_cutoff(p, js, spectrum.lambdas)
    modes = tuple(mode_analysis(p, lam) for lam in kept)
    band = turing_band(p)
    droots = discriminant_roots(p)
    thresholds = [d2_mode_threshold(p, lam) for lam in kept]
    finite_thresholds = [d for d in thresholds if d is not None]
    d2t = min(finite_thresholds) if finite_thresholds else None
    ode = ode_classify(p)
    notes: list[str] = []

    certified = _stability_certificate(p, js, ode, kept, modes, droots, d2t, notes)

    # tail coverage: the cutoff fired, or the remaining eigenvalues sit
    # beyond the band with negative per-mode trace, or a splitting
    # certificate covers the whole spectrum analytically
    threshold = 10.0 * abs(js.fu) + 10.0 * p.sigma * abs(js.gv)
    lam_last = kept[-1]
    tail_resolved = lam_last * min(p.d1, p.d2) > threshold
    if not tail_resolved:
        beyond_band = band is None or lam_last >= band[1]
        trace_negative_beyond = lam_last * (p.d1 + p.d2) > js.trace
        tail_resolved = beyond_band and trace_negative_beyond
    tail_resolved = tail_resolved or certified

    min_margin = min(mode.margin for mode in modes)
    has_negative_det = any(mode.det < 0 for mode in modes)

    if ode.verdict is OdeVerdict.UNSTABLE:
        if js.discriminant < 0:
            overall = OverallVerdict.OSCILLATORY
        else:
            overall = OverallVerdict.INDETERMINATE
            notes.append(
                "well-mixed equilibrium unstable through real eigenvalues; "
                "outside the oscillatory/Turing taxonomy"
            )
    elif has_negative_det:
        if ode.verdict is OdeVerdict.STABLE:
            overall = OverallVerdict.TURING
        else:
            overall = OverallVerdict.INDETERMINATE
            notes.append(
                "marginal well-mixed equilibrium combined with negative-det modes"
            )
    elif ode.verdict is OdeVerdict.MARGINAL:
        overall = OverallVerdict.INDETERMINATE
        notes.append("well-mixed equilibrium sits on the sector boundary")
    elif min_margin > MARGINAL_TOL:
        if tail_resolved:
            overall = OverallVerdict.STABLE
        else:
            overall = OverallVerdict.INDETERMINATE
            notes.append(
                "analyzed modes all clear the sector condition, but the "
                "spectrum was truncated before the diffusion-dominance "
                "cutoff; stability of the tail is unestablished"
            )
    elif min_margin < -MARGINAL_TOL:
        overall = OverallVerdict.OSCILLATORY
        worst = min(modes, key=lambda mode: mode.margin)
        notes.append(
            "sector condition fails through a complex pair at Laplacian "
            f"eigenvalue {worst.lap_eigenvalue:.6g}"
        )
    else:
        overall = OverallVerdict.INDETERMINATE
        notes.append("some analyzed mode sits on the sector boundary")

    return StabilityReport(
        params=p,
        ode=ode,
        modes=modes,
        turing_band=band,
        discriminant_roots=droots,
        d2_threshold=d2t,
        overall=overall,
        notes=tuple(notes),
    )


def _stability_certificate(
    p: SystemParams,
    js: JacobianSummary,
    ode: OdeClassification,
    kept: list[float],
    modes: tuple[ModeAnalysis, ...],
    droots: tuple[float, float] | None,
    d2t: float | None,
    notes: list[str],
) -> bool:
    """Evaluate the diffusion-splitting sufficient conditions.

    Returns True when one of them covers every spatial mode, analyzed or
    not, so a clean margin scan over the truncated spectrum extends to
    the full one.  Each branch is an analytic statement about all
    Laplacian eigenvalues, which is what lets the truncation off the hook.
    """
    lam_last = kept[-1]
    if p.d1 == p.d2:
        # J - d*lam*I only shifts eigenvalues left, so the well-mixed
        # verdict propagates to every mode
        notes.append(
            "equal diffusivities: spatial modes inherit the well-mixed verdict"
        )
        return ode.verdict is OdeVerdict.STABLE
    if js.fu <= 0:
        # every positive mode then has negative per-mode trace and
        # positive per-mode det, hence negative-real-part eigenvalues
        notes.append(
            "activator gain nonpositive: every spatial mode is sector-stable"
        )
        return True
    if not (js.trace < 0 and js.discriminant > 0):
        return False
    positive = [lam for lam in kept if lam > 0]
    if not positive:
        return False
    lam1 = positive[0]
    if p.d1 < p.d2:
        if lam1 * p.d1 >= js.fu:
            notes.append(
                "certified stable: the first nonzero mode already absorbs the "
                "activator gain"
            )
            return True
        # the det threshold must have been minimized over every mode that
        # can destabilize, i.e. the analyzed spectrum must reach fu/d1
        if d2t is not None and p.d2 < d2t and lam_last * p.d1 >= js.fu:
            notes.append(
                "certified stable: inhibitor diffusivity below the "
                f"mode-det threshold {d2t:.6g}"
            )
            return True
        return False
    if droots is None:
        if lam1 * p.d1 >= js.fu:
            notes.append(
                "certified stable: first mode absorbs the activator gain and "
                "no mode carries a complex pair"
            )
            return True
        return False
    inside = [
        mode for mode in modes if droots[0] < mode.lap_eigenvalue < droots[1]
    ]
    if (
        lam1 * p.d1 >= js.fu
        and lam_last >= droots[1]
        and all(mode.margin > MARGINAL_TOL for mode in inside)
    ):
        notes.append(
            "certified stable: first mode absorbs the activator gain and "
            "all complex-pair modes clear the sector condition"
        )
        return True
    return False


def global_stability_condition(p: SystemParams) -> bool:
    """True iff a^2 <= 27, the regime with a globally attracting equilibrium.

    The multiplier tolerates one ulp of squaring error so the exact
    mathematical boundary stays inside the condition.
    """
    return p.a * p.a <= 27.0 * (1.0 + 1e-12)
