"""Accuracy of the L1 fractional-derivative kernel against closed forms.

The derivative of t**p has an exact expression for any order, which makes
power functions the standard yardstick: evaluate the discrete kernel on a
uniform grid, halve the step a few times, and watch the error shrink at
the predicted rate 2 - delta.  The script also shows the integer-order
collapse: at delta = 1 the weights degenerate so the kernel IS the
backward difference, with zero extra error.
"""

import numpy as np

from fraclep import caputo_l1_series, caputo_power_rule, l1_weights


def error_at_one(delta, dt):
    # f(t) = t^2 sampled on [0, 1]; compare the last node against the
    # closed form
    n = round(1.0 / dt)
    t = np.arange(n + 1) * dt
    num = caputo_l1_series(t * t, delta, dt)[-1]
    return abs(num - caputo_power_rule(2.0, delta, 1.0))


def main():
    print("L1 error for d^delta/dt^delta of t^2 at t = 1")
    print(f"{'delta':>6} {'dt':>9} {'error':>12} {'observed order':>15}")
    for delta in (0.3, 0.5, 0.7, 0.9):
        prev = None
        for dt in (4e-3, 2e-3, 1e-3):
            e = error_at_one(delta, dt)
            order = f"{np.log2(prev / e):14.3f}" if prev else " " * 14
            print(f"{delta:6.1f} {dt:9.0e} {e:12.3e} {order:>15}")
            prev = e
        print(f"       predicted order: {2 - delta:.1f}")

    # the delta = 1 case is exact degeneration, not an approximation
    w = l1_weights(1.0, 1e-3, 10)
    print(f"\ndelta = 1 weights beyond the first: {w.b[1:4]} (all exactly zero)")
    t = np.arange(0, 1001) * 1e-3
    collapse = caputo_l1_series(t * t, 1.0, 1e-3) - np.diff(t * t) / 1e-3
    print(f"max gap to the backward difference: {np.abs(collapse).max():.1e}")


if __name__ == "__main__":
    main()
