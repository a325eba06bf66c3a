"""Hyperbolic gamma function (modular quantum dilogarithm) in product and
integral representations, its Bernoulli-phase normalization, asymptotics,
and pole bookkeeping."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (
    OutsideCone,
    OutsideConvergenceStrip,
    PoleHit,
    ProductNotConvergent,
)
from .gamma_core import log_q_pochhammer_inf
from .numerics import LineContour, QuadratureSpec

_POLE_GUARD = 1e-8

# Bernoulli numbers B_m / m! for t/(e^t - 1); odd entries vanish beyond m=1
_BERN_RAW = {0: 1.0, 1: -0.5, 2: 1 / 6, 4: -1 / 30, 6: 1 / 42, 8: -1 / 30,
             10: 5 / 66, 12: -691 / 2730, 14: 7 / 6, 16: -3617 / 510,
             18: 43867 / 798, 20: -174611 / 330}
_BERN = [_BERN_RAW.get(m, 0.0) / math.factorial(m) for m in range(21)]


def _series_mul(a, b, order):
    out = np.zeros(order, dtype=complex)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        top = min(order - i, len(b))
        out[i:i + top] += ai * b[:top]
    return out


@dataclass(frozen=True)
class ModularPair:
    """Quasi-period pair (omega1, omega2) with derived bases.

    q and qt follow the convention attached to the sign of Im(omega1/omega2);
    when the ratio is real (|q| = 1) only the integral representation applies
    and product_valid is False.
    """
    omega1: complex
    omega2: complex

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        if w1 == 0 or w2 == 0:
            raise ValueError("omega1, omega2 must be nonzero")
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        r = w1 / w2
        if r.imag > 0:
            a, b = w1, w2
            convention = "standard"
        elif r.imag < 0:
            a, b = w2, w1
            convention = "swapped"
        else:
            a, b = w1, w2
            convention = "unimodular"
        object.__setattr__(self, "_wa", a)
        object.__setattr__(self, "_wb", b)
        object.__setattr__(self, "convention", convention)
        q = cmath.exp(2j * math.pi * (a / b))
        qt = cmath.exp(-2j * math.pi * (b / a))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qt", qt)
        object.__setattr__(self, "Q", w1 + w2)
        object.__setattr__(self, "b", cmath.sqrt(w1 / w2))
        object.__setattr__(self, "product_valid", abs(q) < 1 and abs(qt) < 1)

    @property
    def sqrt_w12(self) -> complex:
        return cmath.sqrt(self.omega1 * self.omega2)


def bernoulli_b22(u, mp: ModularPair):
    """Second-order double Bernoulli polynomial B_{2,2}(u; omega1, omega2)."""
    u = np.asarray(u, dtype=complex) if np.ndim(u) else complex(u)
    Q = mp.Q
    return ((u - Q / 2) ** 2 - (mp.omega1 ** 2 + mp.omega2 ** 2) / 12) \
        / (mp.omega1 * mp.omega2)


def pole_distance(u, mp: ModularPair) -> float:
    """Distance from u to the pole lattice {-n w1 - m w2, n,m >= 0}."""
    u = complex(u)
    lim = int(abs(u) / min(abs(mp.omega1), abs(mp.omega2))) + 3
    best = math.inf
    for n in range(lim + 1):
        for m in range(lim + 1):
            best = min(best, abs(u + n * mp.omega1 + m * mp.omega2))
    return best


def log_gamma_h_array(u, mp: ModularPair):
    """log gamma_h on an array of points via the double q-product (no guards)."""
    if not mp.product_valid:
        raise ProductNotConvergent("product form needs |q|, |qt| < 1")
    u = np.asarray(u, dtype=complex)
    e1 = np.exp(2j * np.pi * u / mp._wa)
    e2 = np.exp(2j * np.pi * u / mp._wb)
    return log_q_pochhammer_inf(mp.qt * e1, mp.qt) \
        - log_q_pochhammer_inf(e2, mp.q)


def gamma_h_product(u, mp: ModularPair) -> complex:
    """Hyperbolic gamma from the double infinite product."""
    u = complex(u)
    if not mp.product_valid:
        raise ProductNotConvergent("product form needs |q|, |qt| < 1")
    if pole_distance(u, mp) < _POLE_GUARD:
        raise PoleHit(f"u={u} within {_POLE_GUARD} of the pole lattice")
    return complex(np.exp(log_gamma_h_array(np.array([u]), mp))[0])


def _integral_strip(u: complex, mp: ModularPair):
    """Decay rates (kappa_minus, kappa_plus) of the integrand, or None if outside."""
    w1, w2, Q = mp.omega1, mp.omega2, mp.Q
    r1, r2, ru, rQ = w1.real, w2.real, u.real, Q.real
    if r1 > 0 and r2 > 0:
        if 0 < ru < rQ:
            return ru, rQ - ru
    elif r1 < 0 and r2 < 0:
        if rQ < ru < 0:
            return ru - rQ, -ru
    elif r2 <= 0 < r1:
        if r2 < ru < r1:
            return ru - r2, r1 - ru
    elif r1 <= 0 < r2:
        if r1 < ru < r2:
            return ru - r1, r2 - ru
    return None


def gamma_h_integral(u, mp: ModularPair, spec: QuadratureSpec | None = None) -> complex:
    """Hyperbolic gamma from the exponential of the indented line integral.

    The third-order pole at the origin is handled by subtracting its Laurent
    model on a fixed neighborhood; the model's integral over the indented path
    is added back in closed form (its x^-1 coefficient is w1 w2 B22(u)/2, so
    the half-residue contributes the familiar Bernoulli phase).
    """
    u = complex(u)
    strip = _integral_strip(u, mp)
    if strip is None:
        raise OutsideConvergenceStrip(
            f"Re(u)={u.real} outside the strip for omegas {mp.omega1}, {mp.omega2}")
    km, kp = strip
    X = min(max(46.0 / min(km, kp), 24.0), 5e5)
    spec = spec or QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11,
                                  max_subdivisions=20000)
    w1, w2 = mp.omega1, mp.omega2
    w12 = w1 * w2
    # Laurent data: h = P(x)/(w1 w2 x^3) with P the product of the Bernoulli
    # generating series of both omegas and the exponential series of u
    order = len(_BERN)
    p = np.zeros(order, dtype=complex)
    p[0] = 1.0
    for wk in (w1, w2):
        q = np.array([_BERN[m] * wk ** m for m in range(order)], dtype=complex)
        p = _series_mul(p, q, order)
    eser = np.array([u ** j / math.factorial(j) for j in range(order)],
                    dtype=complex)
    p = _series_mul(p, eser, order)
    a2, a1 = p[1], p[2]  # a1 = w1 w2 B22(u)/2
    gser = p[3:][::-1]  # ascending powers reversed for Horner

    scale = max(abs(w1), abs(w2), abs(u) / 4, 1.0)
    x_sw = min(0.25, 1.2 / scale)

    def h(x):
        return np.exp(u * x) / ((1 - np.exp(w1 * x)) * (1 - np.exp(w2 * x)) * x)

    def g(x):
        x = np.asarray(x, dtype=complex)
        out = np.empty_like(x)
        near = np.abs(x) < x_sw
        if near.any():
            xs = x[near]
            acc = np.zeros_like(xs)
            for c in gser:
                acc = acc * xs + c
            out[near] = acc / w12
        far = ~near
        if far.any():
            xf = x[far]
            out[far] = h(xf) - (1 / xf ** 3 + a2 / xf ** 2 + a1 / xf) / w12
        return out

    # a quasi-period on the imaginary axis puts its pole ladder on the real
    # line; under the valid perturbation omega -> omega + eps the ladder moves
    # off axis, and the surviving contour is a line tilted away from it
    phi = 0.0
    for wk in (w1, w2):
        if abs(wk.real) <= 1e-13 * abs(wk):
            rays = [abs(math.pi / 2 - abs(cmath.phase(wo)))
                    for wo in (w1, w2) if abs(wo.real) > 1e-13 * abs(wo)]
            phi = min([0.15] + [r / 3 for r in rays if r > 0])
            phi *= -1.0 if wk.imag > 0 else 1.0
            X *= 1.25
            break
    d = cmath.exp(1j * phi)

    w = min(4 * x_sw, X / 4)
    sub = QuadratureSpec(spec.abs_tol / 3, spec.rel_tol, spec.max_subdivisions)
    val = 0.0 + 0.0j
    for (lo, hi) in ((-X, -w), (w, X)):
        c = LineContour(anchor=d * (lo + hi) / 2, direction=d,
                        half_length=(hi - lo) / 2)
        v, _ = numerics.integrate_line(h, c, sub)
        val += v
    mid = LineContour(anchor=0.0, direction=d, half_length=w,
                      indentations=(((0.0 + 0.0j), 1e-3, "above"),))
    v, _ = numerics.integrate_line(g, mid, sub)
    val += v
    # model integral over the indented tilted segment: the odd antiderivatives
    # cancel at the endpoints +-w*d except for the half-residue of the 1/x term
    val += (a2 * (-2.0 / (w * d)) + a1 * (-1j * math.pi)) / w12
    return cmath.exp(-val)


def gamma_h(u, mp: ModularPair, method: str = "auto") -> complex:
    """Hyperbolic gamma; dispatches product vs integral representation."""
    if method == "product":
        return gamma_h_product(u, mp)
    if method == "integral":
        return gamma_h_integral(u, mp)
    if method != "auto":
        raise ValueError("method must be 'auto', 'product' or 'integral'")
    if mp.product_valid and abs(mp.q) <= 0.9999:
        return gamma_h_product(u, mp)
    return gamma_h_integral(u, mp)


def gamma2(u, mp: ModularPair, method: str = "auto") -> complex:
    """Bernoulli-phase normalized hyperbolic gamma."""
    u = complex(u)
    phase = cmath.exp(-1j * math.pi / 2 * complex(bernoulli_b22(u, mp)))
    return phase * gamma_h(u, mp, method)


def log_gamma2_array(u, mp: ModularPair):
    """log gamma2 on arrays (kernel building block; product representation)."""
    u = np.asarray(u, dtype=complex)
    return -1j * np.pi / 2 * bernoulli_b22(u, mp) + log_gamma_h_array(u, mp)


def _in_cone(angle, lo, hi):
    # compare modulo 2 pi against the (lo, hi) arc
    tau = 2 * math.pi
    a = (angle - lo) % tau
    return 0 < a < (hi - lo) % tau or (hi - lo) % tau == 0


def asymptotic_phase(u, mp: ModularPair, region: str) -> complex:
    """exp(+-(i pi/2) B22) * gamma2; tends to 1 as |u| grows in the region cone.

    Assembled in log space: the phase and the gamma both overflow separately
    at large |u| while their product stays bounded.
    """
    u = complex(u)
    a1 = cmath.phase(mp.omega1)
    a2 = cmath.phase(mp.omega2)
    ang = cmath.phase(u)
    if region == "A":
        if not _in_cone(ang, a1, a2 + math.pi):
            raise OutsideCone(f"arg u = {ang} outside region A")
        s = +1
    elif region == "B":
        if not _in_cone(ang, a1 - math.pi, a2):
            raise OutsideCone(f"arg u = {ang} outside region B")
        s = -1
    else:
        raise ValueError("region must be 'A' or 'B'")
    phase = s * 1j * math.pi / 2 * complex(bernoulli_b22(u, mp))
    if mp.product_valid and abs(mp.q) <= 0.9999:
        log_val = phase + complex(log_gamma2_array(np.array([u]), mp)[0])
        return cmath.exp(log_val)
    return cmath.exp(phase) * gamma2(u, mp)


@dataclass(frozen=True)
class HyperbolicPoleSet:
    """Lattice ray of poles {base + n w1 + m w2} (up) or its negative (down)."""
    base: complex
    mp: ModularPair
    orientation: str = "up"

    def __post_init__(self):
        if self.orientation not in ("up", "down"):
            raise ValueError("orientation must be 'up' or 'down'")

    def points(self, count: int):
        return enumerate_poles(self.base, self.mp, self.orientation, count)


def enumerate_poles(base, mp: ModularPair, orientation: str, count: int):
    """First `count` points of {base + n w1 + m w2 : n, m >= 0} by modulus.

    orientation='down' returns the reflected set {-base - n w1 - m w2}.
    """
    if count < 1:
        raise ValueError("count >= 1")
    base = complex(base)
    lim = count + 2
    pts = []
    for n in range(lim + 1):
        for m in range(lim + 1):
            p = base + n * mp.omega1 + m * mp.omega2
            pts.append((abs(p), n, m, p))
    pts.sort(key=lambda t: (t[0], t[1], t[2]))
    sel = [p for (_, _, _, p) in pts[:count]]
    if orientation == "down":
        sel = [-p for p in sel]
    return sel
