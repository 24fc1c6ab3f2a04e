"""Classify equilibria before running anything.

Three parameter sets, three different fates for the same kinetics:
an oscillatory set whose equilibrium is unstable at integer order but
stabilizes below a critical fractional order, a diffusion-driven set
that is stable well mixed yet unstable once unequal diffusivities act,
and a globally stable set. The analyzer reports all of it from closed
forms; no time stepping involved.
"""

from fraclep import (
    SystemParams,
    critical_order,
    global_stability_condition,
    jacobian_summary,
    ode_classify,
    pde_classify,
)


def describe(name, p, lengths):
    js = jacobian_summary(p)
    ode = ode_classify(p)
    report = pde_classify(p, lengths)
    print(f"--- {name}: a={p.a}, b={p.b}, sigma={p.sigma}, "
          f"d=({p.d1}, {p.d2}), delta={p.delta}")
    print(f"  trace {js.trace:+.4f}, det {js.det:.4f}, "
          f"discriminant {js.discriminant:+.4f}")
    print(f"  well-mixed verdict: {ode.verdict.value} ({ode.case_tag})")
    dstar = critical_order(p)
    if dstar is not None:
        print(f"  critical order: {dstar:.6f}")
    if report.turing_band is not None:
        lo, hi = report.turing_band
        print(f"  diffusion-driven band: Laplacian eigenvalues in "
              f"({lo:.4f}, {hi:.4f})")
    print(f"  overall: {report.overall.value}")
    for note in report.notes:
        print(f"  note: {note}")
    print()


def main():
    describe("oscillatory",
             SystemParams(a=15.0, b=1.0, sigma=7.0, d1=1.0, d2=10.0, delta=1.0),
             (20.0,))
    describe("diffusion-driven",
             SystemParams(a=15.0, b=1.2, sigma=8.0, d1=1.0, d2=24.0, delta=1.0),
             (50.0, 50.0))
    p = SystemParams(a=4.0, b=1.0, sigma=2.0, d1=1.0, d2=1.0, delta=0.9)
    describe("globally stable", p, (20.0,))
    print(f"global-stability saturation bound holds for a=4: "
          f"{global_stability_condition(p)} (needs a^2 <= 27)")


if __name__ == "__main__":
    main()
