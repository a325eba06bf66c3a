"""
The numerical engines underneath
================================

Everything in this package reduces to four operations: adaptive contour
integration (with indentation arcs around poles), bilateral summation with
tail modeling, planar integration with polar refinement at singular points,
and step-size extrapolation. This script exercises each directly.
"""
import math

import numpy as np

from sfkit import (
    LineContour,
    MBSpec,
    PlaneWindow,
    QuadratureSpec,
    bilateral_sum,
    integrate_line,
    integrate_plane,
    richardson_extrapolate,
)

print("line integrals")
val, err = integrate_line(lambda z: np.exp(-z * z), LineContour())
print(f"  gaussian over the whole line: {val.real:.15f} (sqrt(pi) = {math.sqrt(math.pi):.15f})")

# an indented contour: third-order pole at the origin, arc passes above
u, w1, w2 = 0.7, 1.0, 1.0 + 1.0j
f = lambda x: np.exp(u * x) / ((1 - np.exp(w1 * x)) * (1 - np.exp(w2 * x)) * x)
c = LineContour(anchor=0.0, half_length=70.0, indentations=((0.0, 0.01, "above"),))
val, err = integrate_line(f, c, QuadratureSpec(1e-10, 1e-10, 40000))
print(f"  indented kernel integral: exp(-I) = {np.exp(-val)}")

print()
print("bilateral sums")
val, trunc = bilateral_sum(lambda N: 1.0 / (N * N + 1), 0, MBSpec(n_max=40))
print(f"  sum 1/(N^2+1) over Z = {val.real:.10f}"
      f"  (pi coth pi = {math.pi / math.tanh(math.pi):.10f})")
print(f"  truncation: n_used={trunc.n_used}, estimated tail={trunc.est_tail:.1e}")

print()
print("plane integrals with declared singular points")
al = be = 1.0 / 3.0
g = lambda w: (np.abs(w) ** (2 * al - 2) * np.abs(1 - w) ** (2 * be - 2)
               / math.pi + 0j)
win = PlaneWindow(center=0.5, half_width=8.0, half_height=8.0,
                  singularities=((0.0, 2 * al - 2), (1.0, 2 * be - 2)),
                  tail_power=2 * (al + be) - 4)
val, err = integrate_plane(g, win, QuadratureSpec(1e-7, 1e-6, 30000))
print(f"  two-point power kernel: {val.real:.8f} (err est {err:.1e})")

print()
print("extrapolation")
samples = [(h, 1 + 3 * h + 2 * h * h) for h in (0.1, 0.05, 0.025)]
print("  h->0 limit of 1+3h+2h^2 from three samples:",
      richardson_extrapolate(samples, 1))
