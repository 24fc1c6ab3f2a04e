"""Fractional-order activator-inhibitor dynamics: analysis and simulation.

The package couples an L1 discretization of the Caputo derivative with an
implicit-explicit reaction-diffusion stepper, and pairs the simulator with
closed-form stability classification so each prediction can be checked
against trajectories.
"""

from .config import (
    ConfigError,
    ICSpec,
    SimConfig,
    StabilityQuery,
    parse_config,
    parse_config_data,
    serialize_config,
)
from .diagnostics import (
    LyapunovSample,
    PatternMetrics,
    convergence_metrics,
    lyapunov_monitor,
    lyapunov_value,
    pattern_metrics,
)
from .fractional import (
    L1Weights,
    ScalarHistory,
    caputo_l1,
    caputo_l1_series,
    caputo_power_rule,
    l1_weights,
    square_rule_margins,
    validate_order,
)
from .kinetics import (
    Equilibrium,
    InternalConsistencyError,
    InvariantRectangle,
    JacobianSummary,
    SystemParams,
    equilibrium,
    feed_ratio,
    feed_ratio_decreasing,
    invariant_rectangle,
    jacobian_summary,
    reaction_rates,
    saturating_uptake,
)
from .solver import (
    FieldState,
    Grid,
    L1FieldHistory,
    NonFiniteStateError,
    RunResult,
    SolverError,
    laplacian,
    make_ic,
    run,
    step,
)
from .stability import (
    ModeAnalysis,
    OdeClassification,
    OdeVerdict,
    OverallVerdict,
    StabilityReport,
    critical_order,
    d2_mode_threshold,
    discriminant_roots,
    global_stability_condition,
    matignon_margin,
    mode_analysis,
    neumann_eigenvalues,
    ode_classify,
    ode_eigenvalues,
    pde_classify,
    turing_band,
)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Equilibrium",
    "FieldState",
    "Grid",
    "ICSpec",
    "InternalConsistencyError",
    "InvariantRectangle",
    "JacobianSummary",
    "L1FieldHistory",
    "L1Weights",
    "LyapunovSample",
    "ModeAnalysis",
    "NonFiniteStateError",
    "OdeClassification",
    "OdeVerdict",
    "OverallVerdict",
    "PatternMetrics",
    "RunResult",
    "ScalarHistory",
    "SimConfig",
    "SolverError",
    "StabilityQuery",
    "StabilityReport",
    "SystemParams",
    "caputo_l1",
    "caputo_l1_series",
    "caputo_power_rule",
    "convergence_metrics",
    "critical_order",
    "d2_mode_threshold",
    "discriminant_roots",
    "equilibrium",
    "feed_ratio",
    "feed_ratio_decreasing",
    "global_stability_condition",
    "invariant_rectangle",
    "jacobian_summary",
    "l1_weights",
    "laplacian",
    "lyapunov_monitor",
    "lyapunov_value",
    "make_ic",
    "matignon_margin",
    "mode_analysis",
    "neumann_eigenvalues",
    "ode_classify",
    "ode_eigenvalues",
    "parse_config",
    "parse_config_data",
    "pattern_metrics",
    "pde_classify",
    "reaction_rates",
    "run",
    "run_verify",
    "saturating_uptake",
    "serialize_config",
    "square_rule_margins",
    "step",
    "turing_band",
    "validate_order",
    "__version__",
]
