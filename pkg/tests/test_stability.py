"""Stability-theory oracles.

Frozen numbers come from direct quadratic solves (np.roots / np.linalg.eig
in the derivations) and from evaluating the closed forms with plain
arithmetic; the bisection cross-check for the band lives in the built-in
verify suite and in the acceptance tests.
"""

import cmath
import math

import numpy as np
import pytest

from fraclep.kinetics import SystemParams, jacobian_summary
from fraclep.stability import (
    MARGINAL_TOL,
    OdeVerdict,
    OverallVerdict,
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

P157 = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0)
PTURING = SystemParams(a=15.0, b=1.2, sigma=8.0, d1=1.0, d2=24.0, delta=1.0)
PSTABLE = SystemParams(a=4.0, b=1.0, sigma=2.0, d1=1.0, d2=1.0, delta=0.9)


def test_matignon_margin_signs():
    # purely real negative: maximal margin pi - delta*pi/2
    assert matignon_margin(-1.0 + 0.0j, 0.5) == pytest.approx(
        math.pi - 0.25 * math.pi, rel=1e-15
    )
    # positive real axis: minimal margin, always unstable
    assert matignon_margin(2.0 + 0.0j, 0.5) == pytest.approx(
        -0.25 * math.pi, rel=1e-15
    )
    with pytest.raises(ValueError):
        matignon_margin(0.0 + 0.0j, 0.5)


def test_ode_eigenvalues_frozen():
    lo, hi = ode_eigenvalues(P157)
    assert hi == pytest.approx(0.05 + 3.239984567864483j, rel=1e-12)
    assert lo == pytest.approx(0.05 - 3.239984567864483j, rel=1e-12)


def test_ode_eigenvalues_satisfy_characteristic():
    for p in (P157, PTURING, PSTABLE):
        js = jacobian_summary(p)
        for lam in ode_eigenvalues(p):
            resid = lam * lam - js.trace * lam + js.det
            assert abs(resid) <= 1e-10 * max(1.0, abs(js.det))


def test_ode_classify_unstable_at_integer_order():
    c = ode_classify(P157)
    assert c.verdict is OdeVerdict.UNSTABLE
    assert c.case_tag == "complex-eigenvalues, positive-trace"
    assert c.critical_order == pytest.approx(0.9901763537936263, abs=1e-12)


def test_ode_classify_stable_below_critical_order():
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=0.95)
    c = ode_classify(p)
    assert c.verdict is OdeVerdict.STABLE
    assert c.margin > 0.0


def test_ode_classify_marginal_exactly_at_critical_order():
    dstar = critical_order(P157)
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=dstar)
    c = ode_classify(p)
    assert c.verdict is OdeVerdict.MARGINAL
    assert abs(c.margin) <= MARGINAL_TOL


def test_critical_order_against_quadratic_oracle():
    # brute-force oracle: solve the characteristic quadratic directly
    js = jacobian_summary(P157)
    disc = complex(js.trace * js.trace - 4.0 * js.det)
    root = (js.trace + cmath.sqrt(disc)) / 2.0
    oracle = (2.0 / math.pi) * abs(cmath.phase(root))
    assert critical_order(P157) == pytest.approx(oracle, abs=1e-14)
    assert critical_order(P157) == pytest.approx(0.990177, abs=1e-4)


def test_critical_order_branch_cases():
    # negative trace, complex pair: stable at every order, no threshold
    assert critical_order(PTURING) is None
    # real eigenvalues with positive trace: unstable at every order
    p = SystemParams(a=20.0, b=0.01, sigma=0.01, d1=1.0, d2=1.0, delta=1.0)
    js = jacobian_summary(p)
    assert js.discriminant > 0.0 and js.trace > 0.0
    assert critical_order(p) == 0.0


def test_neumann_eigenvalues_1d():
    spec = neumann_eigenvalues((20.0,), 4)
    expect = [(k * math.pi / 20.0) ** 2 for k in range(5)]
    assert np.allclose(spec.lambdas, expect, rtol=1e-15)
    assert spec.lambdas[0] == 0.0


def test_neumann_eigenvalues_2d_sorted_sums():
    spec = neumann_eigenvalues((1.0, 2.0), 3)
    ax = [(j * math.pi) ** 2 for j in range(4)]
    ay = [(k * math.pi / 2.0) ** 2 for k in range(4)]
    sums = sorted(x + y for x in ax for y in ay)[:4]
    assert np.allclose(spec.lambdas, sums, rtol=1e-15)


def test_mode_analysis_zero_reproduces_ode():
    m = mode_analysis(P157, 0.0)
    ode = ode_eigenvalues(P157)
    assert abs(m.eigenvalues[0] - ode[0]) <= 1e-12 * max(1.0, abs(ode[0]))
    assert abs(m.eigenvalues[1] - ode[1]) <= 1e-12 * max(1.0, abs(ode[1]))


def test_mode_analysis_characteristic_residual():
    lams = neumann_eigenvalues((20.0,), 40).lambdas
    for lam in lams:
        m = mode_analysis(P157, float(lam))
        for xi in m.eigenvalues:
            resid = xi * xi - m.trace * xi + m.det
            assert abs(resid) <= 1e-10 * max(1.0, abs(m.det))


def test_mode_analysis_negative_det_example():
    # frozen: det at lam=1 is 24*(1-2.2)*1 + 2.88*6 = -11.52
    m = mode_analysis(PTURING, 1.0)
    assert m.det == pytest.approx(-11.52, rel=1e-12)
    assert not m.stable


def test_turing_band_frozen():
    band = turing_band(PTURING)
    assert band is not None
    lo, hi = band
    # roots of 24 lam^2 - 49.92 lam + 14.4
    assert lo == pytest.approx(0.346025937084101, abs=1e-12)
    assert hi == pytest.approx(1.733974062915899, abs=1e-12)
    root_check = 24.0 * lo * lo - 49.92 * lo + 14.4
    assert abs(root_check) <= 1e-9


def test_turing_band_empty_for_oscillatory_params():
    # det quadratic 10 lam^2 - 19.9 lam + 10.5 has negative discriminant
    assert (19.9**2 - 4.0 * 10.0 * 10.5) == pytest.approx(-23.99, rel=1e-12)
    assert turing_band(P157) is None


def test_discriminant_roots_bracket_complex_modes():
    # lam=0 reproduces the ODE discriminant -41.99 < 0, so the window
    # straddles zero for these parameters
    droots = discriminant_roots(P157)
    assert droots is not None
    lo, hi = droots
    assert lo < 0.0 < hi
    mid = 0.5 * (max(lo, 0.0) + hi)
    assert mode_analysis(P157, mid).discriminant < 0.0
    assert mode_analysis(P157, hi + 1.0).discriminant > 0.0


def test_discriminant_roots_equal_diffusivities():
    assert discriminant_roots(PSTABLE) is None


def test_d2_threshold_frozen():
    lam1 = (math.pi / 20.0) ** 2
    got = d2_mode_threshold(P157, lam1)
    assert got == pytest.approx(196.59075166703852, rel=1e-12)
    # closed form: c (lam d1 + 5) / ((fu - lam d1) lam), c = 2.1
    expect = 2.1 * (lam1 + 5.0) / ((2.2 - lam1) * lam1)
    assert got == pytest.approx(expect, rel=1e-12)


def test_d2_threshold_excluded_modes():
    # lam d1 >= fu means the mode cannot lose det positivity via d2;
    # the zero mode has no threshold either (division by lam)
    assert d2_mode_threshold(P157, 3.0) is None
    assert d2_mode_threshold(P157, 0.0) is None


def test_pde_classify_oscillatory():
    rep = pde_classify(P157, (20.0,))
    assert rep.overall is OverallVerdict.OSCILLATORY
    assert rep.ode.verdict is OdeVerdict.UNSTABLE
    assert rep.turing_band is None


def test_pde_classify_turing():
    rep = pde_classify(PTURING, (50.0,), m=64)
    assert rep.overall is OverallVerdict.TURING
    assert rep.ode.verdict is OdeVerdict.STABLE
    assert rep.turing_band is not None
    inside = [
        m for m in rep.modes
        if rep.turing_band[0] < m.lap_eigenvalue < rep.turing_band[1]
    ]
    assert inside and all(m.det < 0.0 for m in inside)


def test_pde_classify_turing_2d():
    rep = pde_classify(PTURING, (50.0, 50.0))
    assert rep.overall is OverallVerdict.TURING


def test_pde_classify_stable_equal_diffusivities():
    rep = pde_classify(PSTABLE, (20.0,))
    assert rep.overall is OverallVerdict.STABLE
    assert all(m.margin > 0.0 for m in rep.modes)


def test_pde_classify_stable_unequal_diffusivities():
    p = SystemParams(a=15.0, b=1.2, sigma=8.0, d1=1.0, d2=10.0, delta=1.0)
    rep = pde_classify(p, (50.0, 50.0))
    assert rep.overall is OverallVerdict.STABLE
    assert rep.turing_band is None


def test_pde_classify_marginal_goes_indeterminate():
    dstar = critical_order(P157)
    p = SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=dstar)
    rep = pde_classify(p, (20.0,))
    assert rep.overall is OverallVerdict.INDETERMINATE


def test_order_monotone_consequence():
    # stability at integer order implies stability at every smaller order:
    # shrinking delta only widens the sector
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 50:
        a = float(rng.uniform(1.0, 20.0))
        b = float(rng.uniform(0.1, 3.0))
        s = float(rng.uniform(0.1, 10.0))
        p1 = SystemParams(a=a, b=b, sigma=s, d1=1.0, d2=1.0, delta=1.0)
        if ode_classify(p1).verdict is not OdeVerdict.STABLE:
            continue
        checked += 1
        for delta in np.linspace(0.05, 1.0, 20):
            pd = SystemParams(a=a, b=b, sigma=s, d1=1.0, d2=1.0, delta=float(delta))
            assert ode_classify(pd).verdict is OdeVerdict.STABLE


def test_global_stability_condition_boundary():
    assert global_stability_condition(
        SystemParams(a=5.196, b=1.0, sigma=1.0, d1=1.0, d2=1.0, delta=1.0)
    )
    assert global_stability_condition(
        SystemParams(a=math.sqrt(27.0), b=1.0, sigma=1.0, d1=1.0, d2=1.0, delta=1.0)
    )
    assert not global_stability_condition(
        SystemParams(a=5.2, b=1.0, sigma=1.0, d1=1.0, d2=1.0, delta=1.0)
    )
