"""
A walk up the gamma ladder
==========================

Euler's gamma sits at the bottom of a tower of generalizations: the
q-deformed gamma, the gamma attached to the complex field, the doubly
periodic (elliptic) gamma, and the modular (hyperbolic) gamma. This script
evaluates each one and checks the laws that hold exactly on every level.
"""
import cmath
import math

import numpy as np

from sfkit import (
    EllipticBase,
    ModularPair,
    dedekind_eta,
    elliptic_gamma,
    euler_gamma,
    field_gamma,
    gamma2,
    gamma_h_integral,
    gamma_h_product,
    q_gamma,
)

print("Euler level")
print("  gamma(1/2)                    =", euler_gamma(0.5))
print("  reflection gamma(z)gamma(1-z) =",
      euler_gamma(0.3 + 0.4j) * euler_gamma(0.7 - 0.4j),
      " vs pi/sin(pi z) =", math.pi / cmath.sin(math.pi * (0.3 + 0.4j)))

print()
print("q level: the deformation approaches Euler as q -> 1")
for q in (0.9, 0.99, 0.999):
    print(f"  q={q}: |q_gamma(1/2) - gamma(1/2)| =",
          abs(q_gamma(0.5, q) - euler_gamma(0.5)))
print("  eta(i) =", dedekind_eta(1j), " (self-dual point of the modular law)")

print()
print("complex-field level: a ratio of Euler gammas indexed by (x, n)")
x, n = 0.7 - 0.3j, 2
print("  reflection  :", field_gamma(x, n) * field_gamma(-x - 2j, n))
print("  parity      :", field_gamma(x, -n) / field_gamma(x, n), "(= (-1)^n)")
print("  shift       :", field_gamma(x - 2j, n) / field_gamma(x, n),
      " vs (n^2+x^2)/4 =", (n * n + x * x) / 4)

print()
print("elliptic level: the double product and its reflection")
base = EllipticBase(0.2, 0.3)
z = 0.3 + 0.2j
print("  G(z) G(pq/z) =", elliptic_gamma(z, base)
      * elliptic_gamma(base.p * base.q / z, base))
print("  G(sqrt(pq))  =", elliptic_gamma(np.sqrt(base.p * base.q), base))

print()
print("hyperbolic level: product and integral representations agree")
mp = ModularPair(1.0, cmath.exp(1j * math.pi / 5))
u = 0.3 + 0.1j
gp = gamma_h_product(u, mp)
gi = gamma_h_integral(u, mp)
print("  product :", gp)
print("  integral:", gi)
print("  rel diff:", abs(gp - gi) / abs(gp))
print("  normalized value at the self-dual point:", gamma2(mp.Q / 2, mp))
print("  reflection gamma2(u) gamma2(Q-u) =",
      gamma2(u, mp) * gamma2(mp.Q - u, mp))
