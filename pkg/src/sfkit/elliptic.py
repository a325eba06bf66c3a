"""Elliptic gamma function, the elliptic beta integral, and the eight-parameter
higher hypergeometric function on the unit circle with its transformations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BalancingViolated, ContourPinch, NonConvergence, PoleHit
from .gamma_core import q_pochhammer_inf

_TRUNC_EPS = 1e-17
_PINCH_MODULUS = 0.95


@dataclass(frozen=True)
class EllipticBase:
    """Base pair (p, q) with |p|, |q| < 1."""
    p: complex
    q: complex

    def __post_init__(self):
        if abs(complex(self.p)) >= 1 or abs(complex(self.q)) >= 1:
            raise ValueError("need |p| < 1 and |q| < 1")
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))


def _lattice(base: EllipticBase):
    top = max(abs(base.p), abs(base.q))
    if top == 0:
        return [(0, 0)]
    J = int(math.ceil(math.log(_TRUNC_EPS) / math.log(top)))
    return [(j, k) for j in range(J + 1) for k in range(J + 1 - j)]


def elliptic_gamma(z, base: EllipticBase, *, reciprocal: bool = False):
    """Elliptic gamma by the truncated double product; vectorized over z.

    reciprocal=True returns 1/Gamma(z), finite at the poles of Gamma (used by
    kernels that carry Gamma factors in the denominator).
    """
    zs = np.asarray(z, dtype=complex)
    scalar = zs.ndim == 0
    zs = np.atleast_1d(zs)
    p, q = base.p, base.q
    pq = p * q
    v = np.ones_like(zs)
    for (j, k) in _lattice(base):
        w = p ** j * q ** k
        top = 1 - pq * w / zs
        bot = 1 - zs * w
        if reciprocal:
            top, bot = bot, top
        if np.any(np.abs(bot) < 1e-14):
            raise PoleHit("elliptic gamma evaluated at a lattice pole")
        v = v * top / bot
    return complex(v[0]) if scalar else v


def _circle_kernel(t, base: EllipticBase, M: int):
    """Integrand of the circle beta-type integrals on M half-offset nodes."""
    th = 2 * np.pi * (np.arange(M) + 0.5) / M
    z = np.exp(1j * th)
    vals = elliptic_gamma(z ** 2, base, reciprocal=True) \
        * elliptic_gamma(z ** (-2), base, reciprocal=True)
    for tj in t:
        vals = vals * elliptic_gamma(tj * z, base) * elliptic_gamma(tj / z, base)
    return vals


def circle_beta_integral(t, base: EllipticBase, nodes: int) -> complex:
    """(p;p)(q;q)/(4 pi i) * contour integral over the unit circle, dz/z measure."""
    t = [complex(x) for x in t]
    if max(abs(x) for x in t) >= _PINCH_MODULUS:
        raise ContourPinch(f"max |t_j| = {max(abs(x) for x in t):.4f} too close to 1")
    vals = _circle_kernel(t, base, nodes)
    pref = q_pochhammer_inf(base.p, base.p) * q_pochhammer_inf(base.q, base.q)
    return pref / (4 * np.pi) * vals.sum() * (2 * np.pi / nodes)


def circle_beta_adaptive(t, base: EllipticBase, k_min: int = 8, k_max: int = 14,
                         rel_tol: float = 1e-11):
    """Node-doubling trapezoid evaluation, spectrally convergent on the circle."""
    prev = None
    for k in range(k_min, k_max + 1):
        cur = circle_beta_integral(t, base, 2 ** k)
        if prev is not None and abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur, 2 ** k
        prev = cur
    raise NonConvergence(f"trapezoid not settled at 2^{k_max} nodes")


def _check_balanced(t, target, what):
    prod = np.prod([complex(x) for x in t])
    if abs(prod - target) > 1e-10 * max(abs(target), 1e-300):
        raise BalancingViolated(
            f"{what}: product of parameters is {prod}, expected {target}")


def elliptic_beta_lhs(t, base: EllipticBase, nodes: int | None = None) -> complex:
    """Six-parameter circle integral side of the beta evaluation."""
    t = [complex(x) for x in t]
    if len(t) != 6:
        raise ValueError("expected 6 parameters")
    _check_balanced(t, base.p * base.q, "elliptic beta")
    if nodes is not None:
        return circle_beta_integral(t, base, nodes)
    val, _ = circle_beta_adaptive(t, base)
    return val


def elliptic_beta_rhs(t, base: EllipticBase) -> complex:
    """Product side: 15 elliptic gammas over parameter pairs."""
    t = [complex(x) for x in t]
    if len(t) != 6:
        raise ValueError("expected 6 parameters")
    _check_balanced(t, base.p * base.q, "elliptic beta")
    v = 1.0 + 0.0j
    for j in range(6):
        for k in range(j + 1, 6):
            v *= elliptic_gamma(t[j] * t[k], base)
    return v


@dataclass(frozen=True)
class VParams:
    """Eight circle parameters with the balancing product p^2 q^2."""
    t: tuple
    base: EllipticBase

    def __post_init__(self):
        t = tuple(complex(x) for x in self.t)
        if len(t) != 8:
            raise ValueError("expected 8 parameters")
        object.__setattr__(self, "t", t)
        if max(abs(x) for x in t) >= 1:
            raise ValueError("all |t_a| < 1 required")
        target = (self.base.p * self.base.q) ** 2
        prod = np.prod(t)
        if abs(prod - target) > 1e-10 * abs(target):
            raise BalancingViolated(
                f"product of t is {prod}, expected p^2 q^2 = {target}")


def v_function(params: VParams, nodes: int) -> complex:
    """Eight-parameter hypergeometric circle integral at a fixed node count."""
    return circle_beta_integral(params.t, params.base, nodes)


def v_function_adaptive(params: VParams) -> complex:
    val, _ = circle_beta_adaptive(params.t, params.base)
    return val
