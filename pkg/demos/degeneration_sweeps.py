"""
Degeneration limits between the levels of the tower
===================================================

Three collapses are swept here:

* the modular gamma onto the complex-field gamma (quasi-period ratio -> -1),
* the modular gamma onto Pochhammer symbols (quasi-period ratio -> +1),
* the elliptic gamma onto the modular gamma (both bases radially -> 1).

Each sweep divides the function by its predicted limit form, so the printed
ratios approach 1, and the fitted order is the observed approach rate. The
eta-function ratio shows why the limits are delicate: termwise cancellation
of the two products would predict 1, but the true limit is a twelfth root
of unity.
"""
from sfkit import (
    ModularPair,
    elliptic_to_hyperbolic_ratio,
    eta_ratio_limit,
    limit_b_to_1,
    limit_b_to_i,
)


def show(sweep):
    print(f"  {sweep.label}")
    for d, r in sweep.observed():
        print(f"    d={d:<8g} ratio={r.real:+.6f}{r.imag:+.6f}i   "
              f"|ratio-1|={abs(r - 1):.3e}")
    print(f"    fitted order = {sweep.fitted_order:.3f}")


print("collapse onto the complex-field gamma (ratio -> -1 side):")
show(limit_b_to_i(1, 0.3 - 0.6j, (0.02, 0.01, 0.005, 0.0025)))

print()
print("collapse onto Pochhammer symbols (ratio -> +1 side):")
show(limit_b_to_1(1, 1.0))
show(limit_b_to_1(-1, 0.8 + 0.2j))

print()
print("eta-function ratio: the nontrivial phase")
s = eta_ratio_limit((0.05, 0.025, 0.0125), mode="b_to_i")
for d, r in s.observed():
    print(f"  d={d:<8g} ratio/target = {r:.6f}")
print("  (the naive termwise limit would be 1/target =",
      f"{abs(s.ratios[-1] - 1):.3f} away; the phase is real and persistent)")

print()
print("elliptic -> hyperbolic radial collapse (log-space prefactor):")
mp = ModularPair(1.0, 1.3)
show(elliptic_to_hyperbolic_ratio(0.48 * mp.Q, mp, (0.3, 0.2, 0.1, 0.05)))
