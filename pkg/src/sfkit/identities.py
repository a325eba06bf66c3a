"""Registry of beta-integral identities: kernel builders, seeded samplers
respecting balancing and contour constraints, and one verification entry point.

Parameter containers use the natural coordinates of each family:
line integrals carry gamma2 arguments, sum-integrals carry the continuous
shifts (a or s/t) plus discrete labels (N or N/M) in a nu sector, circle
integrals carry base-pair parameters, and plane integrals carry bracket
exponents with anchor points.
"""
from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import elliptic as ell
from .errors import (
    BalancingViolated,
    ContourPinch,
    NonConvergence,
    UnknownIdentity,
)
from .gamma_core import (
    BracketExponent,
    FieldGammaArg,
    bracket_power,
    euler_gamma,
    field_gamma,
    log_field_gamma_array,
)
from .hyperbolic import ModularPair, gamma2, log_gamma2_array
from .numerics import (
    LineContour,
    MBSpec,
    PlaneWindow,
    QuadratureSpec,
    Truncation,
    bilateral_sum,
    integrate_line,
    integrate_plane,
)

DEFAULT_OMEGAS = (1.0 + 0.0j, complex(math.cos(math.pi / 5), math.sin(math.pi / 5)))

TOL_HYPERBOLIC = 1e-6
TOL_ELLIPTIC = 1e-8
TOL_MB = 1e-4
TOL_PLANE = 1e-3


# --------------------------------------------------------------------------
# parameter containers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexMBParams:
    """Continuous shifts `a` with discrete labels `N` in sector nu.

    For split-kernel identities the tuples concatenate the two parameter
    groups in the documented order (first group, then second group).
    """
    a: tuple
    N: tuple
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(complex(x) for x in self.a))
        object.__setattr__(self, "N", tuple(float(n) for n in self.N))
        if self.nu not in (0, 0.5):
            raise ValueError("nu must be 0 or 1/2")
        for n in self.N:
            if abs((n - self.nu) - round(n - self.nu)) > 1e-12:
                raise ValueError(f"discrete label {n} not in Z + {self.nu}")


@dataclass(frozen=True)
class HyperbolicParams:
    """gamma2 shift parameters for a line-integral identity."""
    g: tuple
    mp: ModularPair = field(default_factory=lambda: ModularPair(*DEFAULT_OMEGAS))

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(complex(x) for x in self.g))


@dataclass(frozen=True)
class EllipticParams:
    t: tuple
    base: ell.EllipticBase

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))


@dataclass(frozen=True)
class PlaneParams:
    """Bracket exponents and anchor points of a plane beta integral."""
    exponents: tuple
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(z) for z in self.points))


@dataclass
class VerificationReport:
    identity: str
    params: object
    lhs: complex
    rhs: complex
    rel_residual: float
    truncation: Truncation
    elapsed_ms: int
    tolerance: float
    passed: bool

    def row(self, seed=None):
        return {
            "identity": self.identity,
            "seed": seed,
            "lhs_re": self.lhs.real, "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real, "rhs_im": self.rhs.imag,
            "rel_residual": self.rel_residual,
            "n_used": self.truncation.n_used,
            "y_used": self.truncation.y_used,
            "elapsed_ms": self.elapsed_ms,
            "pass": self.passed,
        }

    def params_payload(self):
        """JSON-serializable rendering of the parameter container."""
        def c(z):
            z = complex(z)
            sign = "+" if z.imag >= 0 else "-"
            return f"{z.real!r}{sign}{abs(z.imag)!r}i"

        p = self.params
        if isinstance(p, ComplexMBParams):
            return {"a": [c(x) for x in p.a], "N": list(p.N), "nu": p.nu}
        if isinstance(p, HyperbolicParams):
            return {"g": [c(x) for x in p.g],
                    "omega1": c(p.mp.omega1), "omega2": c(p.mp.omega2)}
        if isinstance(p, EllipticParams):
            return {"t": [c(x) for x in p.t],
                    "p": c(p.base.p), "q": c(p.base.q)}
        if isinstance(p, PlaneParams):
            return {"exponents": [[c(e.alpha), c(e.alpha_prime)]
                                  for e in p.exponents],
                    "points": [c(z) for z in p.points]}
        return repr(p)


# --------------------------------------------------------------------------
# Mellin-Barnes sum-integral engine
# --------------------------------------------------------------------------
# A kernel factor (x0, cy, n0, cN) contributes Gamma(x0 + cy*y, n0 + cN*N).

def _pm_factors(x0, n0):
    return [(complex(x0), +1, float(n0), +1), (complex(x0), -1, float(n0), -1)]


def mb_tail_exponent(factors, weight: bool) -> float:
    """Analytic large-|y| decay power of the kernel (integrand ~ |y|^-p)."""
    p = sum(1.0 + f[0].imag for f in factors)
    return p - (2.0 if weight else 0.0)


def _mb_pinch_check(factors):
    gap = min(-f[0].imag for f in factors)
    if gap < 1e-3:
        raise ContourPinch(
            f"pole ladder within {gap:.2e} of the integration line")


def _mb_term(factors, weight, alt, nu, N, spec: MBSpec, qspec, split_at):
    def f(y):
        acc = np.zeros_like(y, dtype=complex)
        for (x0, cy, n0, cN) in factors:
            acc = acc + log_field_gamma_array(x0 + cy * y, n0 + cN * N)
        vals = np.exp(acc)
        if weight:
            vals = vals * (y * y + N * N)
        return vals

    contour = LineContour(anchor=0.0, direction=1.0, half_length=spec.y_max)
    splits = [-split_at, split_at] if 0 < split_at < spec.y_max else []
    val, _ = integrate_line(f, contour, qspec, initial_splits=splits)
    if spec.tail_correction:
        p = spec.tail_exponent
        ys = spec.y_max * (1.0 + np.arange(1, 7) / 25.0)
        fr = f(ys + 0.0j)
        fl = f(-ys + 0.0j)
        Cr = np.mean(fr * ys ** p)
        Cl = np.mean(fl * ys ** p)
        val = val + (Cr + Cl) * spec.y_max ** (1 - p) / (p - 1)
    if alt:
        val = val * (-1.0) ** round(N - nu)
    return val


def mb_sum_integral(factors, weight, nu, spec: MBSpec, alt: bool = False,
                    prefactor: complex = 1.0):
    """Bilateral sum of line integrals for a product-of-field-gamma kernel."""
    _mb_pinch_check(factors)
    max_n0 = max(abs(f[2]) for f in factors)

    probe = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-8, max_subdivisions=2000)
    first = _mb_term(factors, weight, alt, nu, nu, spec, probe,
                     split_at=max_n0 + abs(nu) + 2)
    scale = max(abs(first), 1e-250)
    qspec = QuadratureSpec(abs_tol=scale * 1e-10, rel_tol=1e-8,
                           max_subdivisions=2000)

    def g(N):
        split = max(abs(f[2] + f[3] * N) for f in factors) + 2
        return _mb_term(factors, weight, alt, nu, N, spec, qspec, split)

    # shell decay is fitted, not taken from the y-exponent: kernels whose
    # leading angular part is odd cancel one power in the paired shells
    val, trunc = bilateral_sum(g, nu, spec, shell_exponent=None)
    trunc.y_used = spec.y_max
    return prefactor * val, trunc


# --------------------------------------------------------------------------
# hyperbolic line-integral engine
# --------------------------------------------------------------------------
# A factor (shift, coef, power) contributes power * log gamma2(shift + coef*z).

_MEASURES = {"half": 0.5, "unit": 1.0, "raw": None}


def _hyp_pinch_check(factors, mp: ModularPair):
    sq = mp.sqrt_w12
    for (shift, coef, power) in factors:
        if power > 0:
            gap = (shift / sq).real
            if gap < 1e-3:
                raise ContourPinch(
                    f"gamma2 pole ladder within {gap:.2e} of the contour")


def hyp_line_integral(factors, mp: ModularPair, measure: str = "half",
                      exp_coef: complex = 0.0, qspec: QuadratureSpec | None = None):
    """Contour integral of a gamma2-product kernel along z = i sqrt(w1 w2) t."""
    _hyp_pinch_check(factors, mp)
    sq = mp.sqrt_w12
    mfac = _MEASURES[measure]
    if mfac is None:
        mfac = 1j * sq

    def f(t):
        z = 1j * sq * t
        acc = np.zeros_like(z, dtype=complex)
        for (shift, coef, power) in factors:
            acc = acc + power * log_gamma2_array(shift + coef * z, mp)
        if exp_coef != 0:
            acc = acc + exp_coef * z
        return np.exp(acc) * mfac

    # probe the exponential decay for the cutoff
    with np.errstate(over="ignore", invalid="ignore"):
        ref = np.max(np.abs(f(np.array([0.35, 0.7, -0.35, -0.7]))))
        T = 1.0
        while True:
            m = np.max(np.abs(f(np.array([-1.06 * T, -T, T, 1.06 * T]))))
            if m <= ref * 1e-20 + 1e-290:
                break
            T *= 1.35
            if m > ref * 1e9 or not np.isfinite(m) or T >= 700:
                raise NonConvergence(
                    "kernel decay not detected; parameters outside the "
                    "convergence domain of this identity")
    qspec = qspec or QuadratureSpec(abs_tol=ref * 1e-11 + 1e-280, rel_tol=1e-10,
                                    max_subdivisions=4000)
    contour = LineContour(anchor=0.0, direction=1.0, half_length=1.06 * T)
    val, err = integrate_line(f, contour, qspec, initial_splits=[0.0])
    tr = Truncation(n_used=0, y_used=1.06 * T, est_tail=float(err))
    return val, tr


def _g2_product(pairs, mp):
    v = 1.0 + 0.0j
    for u in pairs:
        v *= gamma2(u, mp)
    return v


# --------------------------------------------------------------------------
# identity evaluators (one per registry row)
# --------------------------------------------------------------------------

def _check_sum(vals, target, what, tol=1e-9):
    s = sum(vals)
    if abs(s - target) > tol * max(1.0, abs(target)):
        raise BalancingViolated(f"{what}: sum is {s}, expected {target}")


def _eval_hyperbolic_beta(p: HyperbolicParams, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, mp.Q, "six-parameter line beta")
    fac = [(gk, +1, +1) for gk in g] + [(gk, -1, +1) for gk in g]
    fac += [(0.0, 2, -1), (0.0, -2, -1)]
    lhs, tr = hyp_line_integral(fac, mp, "half")
    rhs = _g2_product([g[j] + g[k] for j in range(6) for k in range(j + 1, 6)], mp)
    return lhs, rhs, tr


def _ih(g, mp):
    fac = [(gk, +1, +1) for gk in g] + [(gk, -1, +1) for gk in g]
    fac += [(0.0, 2, -1), (0.0, -2, -1)]
    return hyp_line_integral(fac, mp, "half")


def _eval_hyperbolic_trafo_I(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, 2 * mp.Q, "eight-parameter transformation")
    xi = (mp.Q - sum(g[:4])) / 2
    lam = [gj + xi for gj in g[:4]] + [gj - xi for gj in g[4:]]
    lhs, tr = _ih(g, mp)
    pref = _g2_product([g[j] + g[k] for j in range(4) for k in range(j + 1, 4)], mp)
    pref *= _g2_product([g[j] + g[k] for j in range(4, 8) for k in range(j + 1, 8)], mp)
    inner, _ = _ih(lam, mp)
    return lhs, pref * inner, tr


def _eval_hyperbolic_trafo_II(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, 2 * mp.Q, "eight-parameter transformation")
    G = sum(g[:4]) / 2
    img = [G - gj for gj in g[:4]] + [mp.Q - G - gj for gj in g[4:]]
    lhs, tr = _ih(g, mp)
    pref = _g2_product([g[j] + g[k + 4] for j in range(4) for k in range(4)], mp)
    inner, _ = _ih(img, mp)
    return lhs, pref * inner, tr


def _eval_hyperbolic_trafo_III(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, 2 * mp.Q, "eight-parameter reflection")
    lam = [mp.Q / 2 - gj for gj in g]
    lhs, tr = _ih(g, mp)
    pref = _g2_product([g[j] + g[k] for j in range(8) for k in range(j + 1, 8)], mp)
    inner, _ = _ih(lam, mp)
    return lhs, pref * inner, tr


def _eval_hyperbolic_limit_I(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, mp.Q, "three-plus-three line identity")
    f3, h3 = g[:3], g[3:]
    fac = [(fj, +1, +1) for fj in f3] + [(hj, -1, +1) for hj in h3]
    lhs, tr = hyp_line_integral(fac, mp, "unit")
    rhs = _g2_product([f3[j] + h3[k] for j in range(3) for k in range(3)], mp)
    return lhs, rhs, tr


def _eval_hyperbolic_AW(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    lhs, tr = _ih(g, mp)
    rhs = _g2_product([g[j] + g[k] for j in range(4) for k in range(j + 1, 4)], mp)
    rhs /= gamma2(sum(g), mp)
    return lhs, rhs, tr


def _eval_hyperbolic_gmro(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    G = sum(g)
    gt = [mp.Q / 2 - gj for gj in g]

    def plain(gs):
        fac = [(gk, +1, +1) for gk in gs] + [(gk, -1, +1) for gk in gs]
        fac += [(0.0, 2, -1), (0.0, -2, -1)]
        return hyp_line_integral(fac, mp, "raw")

    lhs, tr = plain(g)
    pref = _g2_product([g[j] + g[k] for j in range(6) for k in range(j + 1, 6)], mp)
    pref /= gamma2(G - mp.Q, mp)
    inner, _ = plain(gt)
    return lhs, pref * inner, tr


def _eval_hyperbolic_infy(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    _check_sum(g, 2 * mp.Q, "four-plus-four transformation")
    gj, fj = g[:4], g[4:]

    def side(a4, b4):
        fac = [(aj, +1, +1) for aj in a4] + [(bj, -1, +1) for bj in b4]
        return hyp_line_integral(fac, mp, "raw")

    lhs, tr = side(gj, fj)
    pref = _g2_product([gj[j] + fj[k] for j in range(4) for k in range(4)], mp)
    inner, _ = side([mp.Q / 2 - x for x in fj], [mp.Q / 2 - x for x in gj])
    return lhs, pref * inner, tr


def _eval_hyperbolic_infy_degenerate(p, spec, drop_sign, force_mu):
    g, mp = p.g, p.mp
    g3, f3 = g[:3], g[3:]
    S = sum(g)
    w12 = mp.omega1 * mp.omega2
    fac_l = [(gk, +1, +1) for gk in g3] + [(fk, -1, +1) for fk in f3]
    lhs, tr = hyp_line_integral(fac_l, mp, "raw",
                                exp_coef=1j * math.pi * (mp.Q - S) / w12)
    efac = np.exp(1j * math.pi / (2 * w12) * (
        mp.Q * (sum(f3) - sum(g3))
        + 2 * (g3[0] * g3[1] + g3[0] * g3[2] + g3[1] * g3[2]
               - f3[0] * f3[1] - f3[0] * f3[2] - f3[1] * f3[2])))
    pref = _g2_product([g3[j] + f3[k] for j in range(3) for k in range(3)], mp)
    pref /= gamma2(S - mp.Q, mp)
    fac_r = [(mp.Q / 2 - fk, +1, +1) for fk in f3] + [(mp.Q / 2 - gk, -1, +1) for gk in g3]
    inner, _ = hyp_line_integral(fac_r, mp, "raw",
                                 exp_coef=1j * math.pi * (S - 2 * mp.Q) / w12)
    return lhs, efac * pref * inner, tr


def _cg_pairs(pairs):
    v = 1.0 + 0.0j
    for (x, n) in pairs:
        v *= field_gamma(x, int(round(n)))
    return v


def _eval_complex_beta(p: ComplexMBParams, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    _check_sum(a, -2j, "six-parameter sum-integral beta")
    _check_sum(N, 0.0, "discrete balancing")
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    spec = _with_tail(spec, fac, True)
    lhs, tr = mb_sum_integral(fac, True, nu, spec, prefactor=1 / (8 * math.pi))
    rhs = _cg_pairs([(a[j] + a[k], N[j] + N[k])
                     for j in range(6) for k in range(j + 1, 6)])
    return lhs, rhs, tr


def _mu_for(nu, L, force_mu):
    if force_mu is not None:
        return force_mu
    return nu if round(L) % 2 == 0 else 0.5 - nu


def _eval_complex_trafo_I(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    _check_sum(a, -4j, "eight-parameter transformation")
    _check_sum(N, 0.0, "discrete balancing")
    X = sum(a[:4])
    L = round(sum(N[:4]))
    mu = _mu_for(nu, L, force_mu)
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    spec_l = _with_tail(spec, fac, True)
    lhs, tr = mb_sum_integral(fac, True, nu, spec_l)
    pref = _cg_pairs([(a[j] + a[k], N[j] + N[k])
                      for j in range(4) for k in range(j + 1, 4)])
    pref *= _cg_pairs([(a[j] + a[k], N[j] + N[k])
                       for j in range(4, 8) for k in range(j + 1, 8)])
    sign = 1.0 if drop_sign else (-1.0) ** L
    fac2 = []
    for k in range(4):
        fac2 += _pm_factors(a[k] - X / 2 - 1j, N[k] - L / 2)
    for k in range(4, 8):
        fac2 += _pm_factors(a[k] + X / 2 + 1j, N[k] + L / 2)
    spec_r = _with_tail(spec, fac2, True)
    inner, _ = mb_sum_integral(fac2, True, mu, spec_r)
    return lhs, sign * pref * inner, tr


def _eval_complex_trafo_II(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    _check_sum(a, -4j, "eight-parameter transformation")
    _check_sum(N, 0.0, "discrete balancing")
    Y1, Y2 = sum(a[:4]), sum(a[4:])
    L1, L2 = round(sum(N[:4])), round(sum(N[4:]))
    mu = _mu_for(nu, L1, force_mu)
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    lhs, tr = mb_sum_integral(fac, True, nu, _with_tail(spec, fac, True))
    pref = _cg_pairs([(a[j] + a[k + 4], N[j] + N[k + 4])
                      for j in range(4) for k in range(4)])
    sign = 1.0 if drop_sign else (-1.0) ** L1
    fac2 = []
    for k in range(4):
        fac2 += _pm_factors(Y1 / 2 - a[k], L1 / 2 - N[k])
    for k in range(4, 8):
        fac2 += _pm_factors(Y2 / 2 - a[k], L2 / 2 - N[k])
    inner, _ = mb_sum_integral(fac2, True, mu, _with_tail(spec, fac2, True))
    return lhs, sign * pref * inner, tr


def _eval_complex_trafo_III(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    _check_sum(a, -4j, "eight-parameter reflection")
    _check_sum(N, 0.0, "discrete balancing")
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    lhs, tr = mb_sum_integral(fac, True, nu, _with_tail(spec, fac, True))
    pref = _cg_pairs([(a[j] + a[k], N[j] + N[k])
                      for j in range(8) for k in range(j + 1, 8)])
    fac2 = []
    for k in range(8):
        fac2 += _pm_factors(-1j - a[k], -N[k])
    inner, _ = mb_sum_integral(fac2, True, nu, _with_tail(spec, fac2, True))
    return lhs, pref * inner, tr


def _eval_complex_str_MB(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu  # a = (s1..3, t1..3), N = (N1..3, M1..3)
    _check_sum(a, -2j, "three-plus-three sum-integral")
    _check_sum(N, 0.0, "discrete balancing")
    s3, t3 = a[:3], a[3:]
    N3, M3 = N[:3], N[3:]
    fac = []
    for j in range(3):
        fac.append((s3[j], +1, N3[j], +1))
        fac.append((t3[j], -1, -M3[j], +1))
    spec = _with_tail(spec, fac, False)
    lhs, tr = mb_sum_integral(fac, False, nu, spec, prefactor=1 / (4 * math.pi))
    rhs = _cg_pairs([(s3[j] + t3[k], N3[j] + M3[k])
                     for j in range(3) for k in range(3)])
    return lhs, rhs, tr


def _eval_complex_dBW(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    spec = _with_tail(spec, fac, True)
    lhs, tr = mb_sum_integral(fac, True, nu, spec, prefactor=1 / (8 * math.pi))
    rhs = _cg_pairs([(a[j] + a[k], N[j] + N[k])
                     for j in range(4) for k in range(j + 1, 4)])
    rhs /= field_gamma(sum(a), int(round(sum(N))))
    sign = 1.0 if drop_sign else (-1.0) ** round(2 * nu)
    return lhs, sign * rhs, tr


def _eval_complex_degtrafo_I(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu
    fac = []
    for ak, Nk in zip(a, N):
        fac += _pm_factors(ak, Nk)
    lhs, tr = mb_sum_integral(fac, True, nu, _with_tail(spec, fac, True))
    pref = _cg_pairs([(a[j] + a[k], N[j] + N[k])
                      for j in range(6) for k in range(j + 1, 6)])
    pref /= field_gamma(sum(a) + 2j, int(round(sum(N))))
    sign = 1.0 if drop_sign else (-1.0) ** round(2 * nu)
    fac2 = []
    for k in range(6):
        fac2 += _pm_factors(-1j - a[k], -N[k])
    inner, _ = mb_sum_integral(fac2, True, nu, _with_tail(spec, fac2, True))
    return lhs, sign * pref * inner, tr


def _eval_complex_infy_MB(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu  # (s1..4, t1..4), (N1..4, M1..4)
    _check_sum(a, -4j, "four-plus-four sum-integral")
    _check_sum(N, 0.0, "discrete balancing")
    s4, t4 = a[:4], a[4:]
    N4, M4 = N[:4], N[4:]
    fac = []
    for j in range(4):
        fac.append((s4[j], +1, N4[j], +1))
        fac.append((t4[j], -1, M4[j], -1))
    lhs, tr = mb_sum_integral(fac, False, nu, _with_tail(spec, fac, False))
    sign = 1.0 if drop_sign else (-1.0) ** round(sum(N4))
    pref = _cg_pairs([(s4[j] + t4[k], N4[j] + M4[k])
                      for j in range(4) for k in range(4)])
    fac2 = []
    for k in range(4):
        fac2.append((-1j - t4[k], +1, -M4[k], +1))
        fac2.append((-1j - s4[k], -1, -N4[k], -1))
    inner, _ = mb_sum_integral(fac2, False, nu, _with_tail(spec, fac2, False))
    return lhs, sign * pref * inner, tr


def _eval_complex_trafo_II_deg(p, spec, drop_sign, force_mu):
    a, N, nu = p.a, p.N, p.nu  # (s1..3, t1..3), (N1..3, M1..3)
    s3, t3 = a[:3], a[3:]
    N3, M3 = N[:3], N[3:]
    K = round(sum(N))
    if K % 2 == 0:
        raise BalancingViolated(
            "alternating-kernel identity needs odd total discrete sum")
    fac = []
    for j in range(3):
        fac.append((s3[j], +1, N3[j], +1))
        fac.append((t3[j], -1, M3[j], -1))
    lhs, tr = mb_sum_integral(fac, False, nu, _with_tail(spec, fac, False), alt=True)
    sign = 1.0 if drop_sign else (-1.0) ** K
    pref = _cg_pairs([(s3[k] + t3[j], N3[k] + M3[j])
                      for k in range(3) for j in range(3)])
    pref /= field_gamma(sum(a) + 2j, K)
    fac2 = []
    for k in range(3):
        fac2.append((-1j - t3[k], +1, -M3[k], +1))
        fac2.append((-1j - s3[k], -1, -N3[k], -1))
    inner, _ = mb_sum_integral(fac2, False, nu, _with_tail(spec, fac2, False),
                               alt=True)
    return lhs, sign * pref * inner, tr


def _with_tail(spec: MBSpec, factors, weight) -> MBSpec:
    """Attach the analytic tail exponent of this kernel to the truncation spec."""
    p = mb_tail_exponent(factors, weight)
    correction = spec.tail_correction and p > 1.2
    return MBSpec(n_max=spec.n_max, y_max=spec.y_max, tail_exponent=p if correction else 6.0,
                  tail_correction=correction,
                  extrapolation_levels=spec.extrapolation_levels)


# --- plane integrals ---

def _eval_complex_plane_beta(p: PlaneParams, spec, drop_sign, force_mu):
    (ea, eb) = p.exponents
    z1, z2 = p.points
    w_alpha = ea.alpha + ea.alpha_prime
    w_beta = eb.alpha + eb.alpha_prime
    if not (0 < w_alpha.real < 2 and 0 < w_beta.real < 2
            and (w_alpha + w_beta).real < 2):
        raise BalancingViolated("plane beta exponents outside the convergent box")
    ea1, eb1 = ea.shifted(-1), eb.shifted(-1)

    def f(w):
        return bracket_power(w - z1, ea1) * bracket_power(z2 - w, eb1) / math.pi

    window = PlaneWindow(center=(z1 + z2) / 2, half_width=8.0, half_height=8.0,
                         singularities=((z1, w_alpha.real - 2), (z2, w_beta.real - 2)),
                         patch_radius=0.25,
                         tail_power=(w_alpha + w_beta).real - 4)
    qspec = QuadratureSpec(abs_tol=1e-7, rel_tol=1e-6, max_subdivisions=6000)
    lhs, err = integrate_plane(f, window, qspec)
    al, alp = ea.alpha, ea.alpha_prime
    be, bep = eb.alpha, eb.alpha_prime
    rhs = euler_gamma(al) * euler_gamma(be) / euler_gamma(al + be)
    rhs *= euler_gamma(1 - alp - bep) / (euler_gamma(1 - alp) * euler_gamma(1 - bep))
    rhs *= bracket_power(z2 - z1, BracketExponent(al + be - 1, alp + bep - 1))
    tr = Truncation(n_used=0, y_used=8.0, est_tail=float(err))
    return lhs, rhs, tr


def _eval_complex_plane_str(p: PlaneParams, spec, drop_sign, force_mu):
    (ea, eb, ec) = p.exponents
    z1, z2, z3 = p.points
    tot = ea.alpha + eb.alpha + ec.alpha
    tot_p = ea.alpha_prime + eb.alpha_prime + ec.alpha_prime
    if abs(tot - 1) > 1e-9 or abs(tot_p - 1) > 1e-9:
        raise BalancingViolated("exponents must sum to 1 in both slots")
    exps = (ea, eb, ec)
    pts = (z1, z2, z3)

    def f(w):
        v = np.full(np.shape(w), 1 / math.pi, dtype=complex)
        for e, z in zip(exps, pts):
            v = v * bracket_power(z - w, e.shifted(-1))
        return v

    sings = tuple((z, (e.alpha + e.alpha_prime).real - 2) for e, z in zip(exps, pts))
    center = (z1 + z2 + z3) / 3
    window = PlaneWindow(center=center, half_width=8.0, half_height=8.0,
                         singularities=sings, patch_radius=0.25,
                         tail_power=-4.0)
    qspec = QuadratureSpec(abs_tol=1e-7, rel_tol=1e-6, max_subdivisions=6000)
    lhs, err = integrate_plane(f, window, qspec)
    num = 1.0 + 0.0j
    for e in exps:
        num *= field_gamma(FieldGammaArg.from_alphas(e.alpha, e.alpha_prime))
    den = bracket_power(z3 - z2, ea) * bracket_power(z1 - z3, eb) \
        * bracket_power(z2 - z1, ec)
    tr = Truncation(n_used=0, y_used=8.0, est_tail=float(err))
    return lhs, num / den, tr


# --- elliptic circle integrals ---

def _eval_elliptic_beta(p: EllipticParams, spec, drop_sign, force_mu):
    lhs = ell.elliptic_beta_lhs(p.t, p.base)
    rhs = ell.elliptic_beta_rhs(p.t, p.base)
    return lhs, rhs, Truncation(n_used=0, y_used=1.0, est_tail=0.0)


def _eval_v_trafo(which):
    def run(p: EllipticParams, spec, drop_sign, force_mu):
        base = p.base
        vp = ell.VParams(p.t, base)
        lhs = ell.v_function_adaptive(vp)
        t = p.t
        pq = base.p * base.q
        G = lambda x: ell.elliptic_gamma(x, base)
        if which == 1:
            rho = np.sqrt(t[0] * t[1] * t[2] * t[3] / pq)
            s = tuple(tj / rho for tj in t[:4]) + tuple(tj * rho for tj in t[4:])
            pref = np.prod([G(t[j] * t[k]) for j in range(4) for k in range(j + 1, 4)])
            pref *= np.prod([G(t[j] * t[k]) for j in range(4, 8) for k in range(j + 1, 8)])
        elif which == 2:
            T = np.prod(t[:4])
            U = np.prod(t[4:])
            s = tuple(np.sqrt(T) / tj for tj in t[:4]) \
                + tuple(np.sqrt(U) / tj for tj in t[4:])
            pref = np.prod([G(t[j] * t[k + 4]) for j in range(4) for k in range(4)])
        else:
            s = tuple(np.sqrt(pq) / tj for tj in t)
            pref = np.prod([G(t[j] * t[k]) for j in range(8) for k in range(j + 1, 8)])
        rhs = pref * ell.v_function_adaptive(ell.VParams(s, base))
        return lhs, rhs, Truncation(n_used=0, y_used=1.0, est_tail=0.0)
    return run


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------

def _rng(identity: str, seed: int):
    tag = int.from_bytes(hashlib.sha256(identity.encode()).digest()[:4], "big")
    return np.random.default_rng([int(seed), tag])


def _draw_imags(rng, count, lo, hi, total, last_lo, last_hi, tries=200):
    for _ in range(tries):
        im = rng.uniform(lo, hi, count - 1)
        last = total - im.sum()
        if last_lo < last < last_hi:
            return np.append(im, last)
    raise RuntimeError("imaginary-part draw failed")


def _draw_labels(rng, count, nu, total, cap=2.5, tries=400, parity=None,
                 parity_slice=None, odd_total_slice=None):
    base = np.array([-1.0, 0.0, 1.0]) + nu
    for _ in range(tries):
        N = rng.choice(base, size=count - 1)
        last = total - N.sum()
        if abs(last - nu - round(last - nu)) > 1e-9 or abs(last) > cap:
            continue
        Ns = np.append(N, last)
        if parity is not None and parity_slice is not None:
            L = round(Ns[parity_slice].sum())
            if L % 2 != parity:
                continue
        if odd_total_slice is not None:
            if round(Ns[odd_total_slice].sum()) % 2 == 0:
                continue
        return Ns
    raise RuntimeError("label draw failed")


def _sample_mb6(identity, seed, nu=None, **opts):
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = _draw_imags(rng, 6, -0.38, -0.22, -2.0, -0.9, -0.1)
    re = rng.uniform(-0.35, 0.35, 6)
    re[-1] = -re[:-1].sum()
    N = _draw_labels(rng, 6, nu, 0.0)
    return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)


def _sample_mb8(identity, seed, nu=None, L_parity=None, **opts):
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = _draw_imags(rng, 8, -0.557, -0.443, -4.0, -0.9, -0.1)
    re = rng.uniform(-0.3, 0.3, 8)
    re[-1] = -re[:-1].sum()
    N = _draw_labels(rng, 8, nu, 0.0, parity=L_parity, parity_slice=slice(0, 4))
    return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)


def _sample_dBW(identity, seed, nu=None, **opts):
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = rng.uniform(-0.25, -0.15, 4)
    re = rng.uniform(-0.4, 0.4, 4)
    if nu == 0:
        N = rng.choice([-1.0, 0.0, 1.0], size=4)
    else:
        N = rng.choice([-0.5, 0.5], size=4)
    return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)


def _sample_degtrafo(identity, seed, nu=None, **opts):
    # keep sum(Im a) near -3 so both kernels decay like |y|^-4, and the
    # discrete labels light so the truncated shells are deep in their tail
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = rng.uniform(-0.52, -0.48, 6)
    re = rng.uniform(-0.35, 0.35, 6)
    for _ in range(400):
        N = rng.choice((np.array([-1.0, 0.0, 1.0]) + nu), size=6)
        if abs(N.sum()) <= 1.01:
            return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)
    raise RuntimeError("label draw failed")


def _sample_str_MB(identity, seed, nu=None, **opts):
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = _draw_imags(rng, 6, -0.38, -0.22, -2.0, -0.9, -0.1)
    re = rng.uniform(-0.35, 0.35, 6)
    re[-1] = -re[:-1].sum()
    N = _draw_labels(rng, 6, nu, 0.0)
    return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)


def _sample_infy_MB(identity, seed, nu=None, **opts):
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = _draw_imags(rng, 8, -0.557, -0.443, -4.0, -0.9, -0.1)
    re = rng.uniform(-0.3, 0.3, 8)
    re[-1] = -re[:-1].sum()
    N = _draw_labels(rng, 8, nu, 0.0)
    return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)


def _sample_trafo_II_deg(identity, seed, nu=None, **opts):
    # sum(Im) near -3 balances the two kernel decays; the discrete sum must be
    # odd (here +-1, which keeps the (-1)^sum sign factor active)
    rng = _rng(identity, seed)
    nu = (0.0 if seed % 2 == 0 else 0.5) if nu is None else float(nu)
    im = rng.uniform(-0.52, -0.48, 6)
    re = rng.uniform(-0.3, 0.3, 6)
    for _ in range(400):
        N = rng.choice((np.array([-1.0, 0.0, 1.0]) + nu), size=6)
        if abs(round(N.sum())) == 1:
            return ComplexMBParams(tuple(re + 1j * im), tuple(N), nu)
    raise RuntimeError("odd-sum label draw failed")


def _hyp_mp(opts):
    return opts.get("mp") or ModularPair(*DEFAULT_OMEGAS)


def _sample_hyp(identity, seed, count, mult, ulo, uhi, **opts):
    """Draw count shifts with Re(g/sqrt(w1 w2)) in (ulo, uhi)*c, balanced to mult*Q.

    The solved last parameter is kept inside a window that leaves every image
    parameter of the transformation identities strictly positive.
    """
    rng = _rng(identity, seed)
    mp = _hyp_mp(opts)
    sq = mp.sqrt_w12
    c = (mp.Q / sq).real
    if mult == 2:
        lo_last, hi_last = 0.15 * c, 0.38 * c
    else:
        lo_last, hi_last = 0.06 * c, 0.40 * c
    for _ in range(400):
        u = c * rng.uniform(ulo, uhi, count)
        v = rng.uniform(-0.05, 0.05, count)
        g = (u + 1j * v) * sq
        if mult is not None:
            g[-1] = mult * mp.Q - g[:-1].sum()
            if not (lo_last < (g[-1] / sq).real < hi_last):
                continue
        return HyperbolicParams(tuple(g), mp)
    raise RuntimeError("hyperbolic parameter draw failed")


def _sample_plane(identity, seed, n_points, **opts):
    rng = _rng(identity, seed)
    triples = ((0, 0, 0), (1, -1, 0), (0, 1, -1))
    ns = triples[seed % 3]
    total = 1.3 if n_points == 2 else 2.0  # two-point case must stay under 2
    for _ in range(200):
        w = rng.uniform(0.5, 0.9, n_points)
        w = total * w / w.sum()
        if np.all(w > 0.35) and np.all(w < 1.6):
            break
    exps = []
    for wi, ni in zip(w, ns[:n_points]):
        al = (wi + ni) / 2
        exps.append(BracketExponent(al, al - ni))
    if n_points == 2:
        pts = (0.0, 1.0)
    else:
        pts = (0.0, 1.0, complex(rng.uniform(0.25, 0.55), rng.uniform(0.7, 1.0)))
    return PlaneParams(tuple(exps), pts)


def _sample_elliptic(identity, seed, count, power, **opts):
    rng = _rng(identity, seed)
    for _ in range(200):
        p = rng.uniform(0.12, 0.2)
        q = rng.uniform(0.12, 0.2)
        base = ell.EllipticBase(p, q)
        target = (p * q) ** power
        xbar = math.log(p * q) * power / count
        xs = xbar + rng.uniform(-0.1, 0.1, count - 1) * abs(xbar)
        phs = rng.uniform(-math.pi / 6, math.pi / 6, count - 1)
        t = np.exp(xs + 1j * phs)
        last = target / np.prod(t)
        t = np.append(t, last)
        if 0.05 < abs(last) < 0.8:
            return EllipticParams(tuple(t), base)
    raise RuntimeError("elliptic parameter draw failed")


# --------------------------------------------------------------------------
# registry
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    kind: str
    description: str
    tolerance: float
    evaluator: object
    sampler: object
    n_max_default: int = 40


def _descriptor(id_, kind, desc, tol, evaluator, sampler, n_max=40):
    return IdentityDescriptor(id_, kind, desc, tol, evaluator, sampler, n_max)


REGISTRY = {d.id: d for d in [
    _descriptor("hyperbolic_beta", "hyperbolic-line",
                "six-parameter line beta evaluation", TOL_HYPERBOLIC,
                _eval_hyperbolic_beta,
                lambda s, **o: _sample_hyp("hyperbolic_beta", s, 6, 1, 0.12, 0.18, **o)),
    _descriptor("hyperbolic_trafo_I", "hyperbolic-line",
                "eight-parameter transformation, shift by xi", TOL_HYPERBOLIC,
                _eval_hyperbolic_trafo_I,
                lambda s, **o: _sample_hyp("hyperbolic_trafo_I", s, 8, 2, 0.22, 0.28, **o)),
    _descriptor("hyperbolic_trafo_II", "hyperbolic-line",
                "eight-parameter transformation, half-sum images", TOL_HYPERBOLIC,
                _eval_hyperbolic_trafo_II,
                lambda s, **o: _sample_hyp("hyperbolic_trafo_II", s, 8, 2, 0.22, 0.28, **o)),
    _descriptor("hyperbolic_trafo_III", "hyperbolic-line",
                "eight-parameter reflection Q/2 - g", TOL_HYPERBOLIC,
                _eval_hyperbolic_trafo_III,
                lambda s, **o: _sample_hyp("hyperbolic_trafo_III", s, 8, 2, 0.22, 0.28, **o)),
    _descriptor("hyperbolic_limit_I", "hyperbolic-line",
                "three-plus-three evaluation without weight", TOL_HYPERBOLIC,
                _eval_hyperbolic_limit_I,
                lambda s, **o: _sample_hyp("hyperbolic_limit_I", s, 6, 1, 0.14, 0.19, **o)),
    _descriptor("hyperbolic_AW", "hyperbolic-line",
                "four-parameter evaluation with denominator gamma", TOL_HYPERBOLIC,
                _eval_hyperbolic_AW,
                lambda s, **o: _sample_hyp("hyperbolic_AW", s, 4, None, 0.12, 0.2, **o)),
    _descriptor("hyperbolic_gmro", "hyperbolic-line",
                "six-parameter reflection without balancing", TOL_HYPERBOLIC,
                _eval_hyperbolic_gmro,
                lambda s, **o: _sample_hyp("hyperbolic_gmro", s, 6, None, 0.21, 0.29, **o)),
    _descriptor("hyperbolic_infy", "hyperbolic-line",
                "four-plus-four transformation", TOL_HYPERBOLIC,
                _eval_hyperbolic_infy,
                lambda s, **o: _sample_hyp("hyperbolic_infy", s, 8, 2, 0.22, 0.28, **o)),
    _descriptor("hyperbolic_infy_degenerate", "hyperbolic-line",
                "three-plus-three with exponential prefactors", TOL_HYPERBOLIC,
                _eval_hyperbolic_infy_degenerate,
                lambda s, **o: _sample_hyp("hyperbolic_infy_degenerate", s, 6, None,
                                           0.21, 0.29, **o)),
    _descriptor("complex_beta", "complex-MB",
                "six-parameter sum-integral beta", TOL_MB,
                _eval_complex_beta,
                lambda s, **o: _sample_mb6("complex_beta", s, **o)),
    _descriptor("complex_trafo_I", "complex-MB",
                "eight-parameter transformation with sector rule", TOL_MB,
                _eval_complex_trafo_I,
                lambda s, **o: _sample_mb8("complex_trafo_I", s, **o)),
    _descriptor("complex_trafo_II", "complex-MB",
                "eight-parameter half-sum transformation", TOL_MB,
                _eval_complex_trafo_II,
                lambda s, **o: _sample_mb8("complex_trafo_II", s, **o)),
    _descriptor("complex_trafo_III", "complex-MB",
                "eight-parameter reflection", TOL_MB,
                _eval_complex_trafo_III,
                lambda s, **o: _sample_mb8("complex_trafo_III", s, **o)),
    _descriptor("complex_str_MB", "complex-MB",
                "three-plus-three sum-integral evaluation", TOL_MB,
                _eval_complex_str_MB,
                lambda s, **o: _sample_str_MB("complex_str_MB", s, **o)),
    _descriptor("complex_dBW", "complex-MB",
                "four-parameter sum-integral with denominator gamma", TOL_MB,
                _eval_complex_dBW,
                lambda s, **o: _sample_dBW("complex_dBW", s, **o)),
    _descriptor("complex_degtrafo_I", "complex-MB",
                "six-parameter reflection without balancing", TOL_MB,
                _eval_complex_degtrafo_I,
                lambda s, **o: _sample_degtrafo("complex_degtrafo_I", s, **o),
                n_max=88),
    _descriptor("complex_infy_MB", "complex-MB",
                "four-plus-four transformation without weight", TOL_MB,
                _eval_complex_infy_MB,
                lambda s, **o: _sample_infy_MB("complex_infy_MB", s, **o)),
    _descriptor("complex_trafo_II_deg", "complex-MB",
                "alternating three-plus-three transformation", TOL_MB,
                _eval_complex_trafo_II_deg,
                lambda s, **o: _sample_trafo_II_deg("complex_trafo_II_deg", s, **o),
                n_max=120),
    _descriptor("complex_plane_beta", "complex-plane",
                "two-point plane beta evaluation", TOL_PLANE,
                _eval_complex_plane_beta,
                lambda s, **o: _sample_plane("complex_plane_beta", s, 2, **o)),
    _descriptor("complex_plane_str", "complex-plane",
                "three-point plane evaluation (star-triangle form)", TOL_PLANE,
                _eval_complex_plane_str,
                lambda s, **o: _sample_plane("complex_plane_str", s, 3, **o)),
    _descriptor("elliptic_beta", "elliptic-circle",
                "six-parameter circle beta evaluation", TOL_ELLIPTIC,
                _eval_elliptic_beta,
                lambda s, **o: _sample_elliptic("elliptic_beta", s, 6, 1, **o)),
    _descriptor("v_trafo_1", "elliptic-circle",
                "eight-parameter circle transformation, rho images", TOL_ELLIPTIC,
                _eval_v_trafo(1),
                lambda s, **o: _sample_elliptic("v_trafo_1", s, 8, 2, **o)),
    _descriptor("v_trafo_2", "elliptic-circle",
                "eight-parameter circle transformation, half-product images",
                TOL_ELLIPTIC, _eval_v_trafo(2),
                lambda s, **o: _sample_elliptic("v_trafo_2", s, 8, 2, **o)),
    _descriptor("v_trafo_3", "elliptic-circle",
                "eight-parameter circle reflection", TOL_ELLIPTIC,
                _eval_v_trafo(3),
                lambda s, **o: _sample_elliptic("v_trafo_3", s, 8, 2, **o)),
]}


def list_identities():
    return sorted(REGISTRY)


def registry_hash() -> str:
    text = "|".join(f"{d.id}:{d.kind}:{d.tolerance}:{d.description}"
                    for d in (REGISTRY[i] for i in sorted(REGISTRY)))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def sample_params(identity: str, seed: int, **opts):
    """Deterministic parameter draw inside the identity's validity domain."""
    if identity not in REGISTRY:
        raise UnknownIdentity(identity)
    return REGISTRY[identity].sampler(int(seed), **opts)


def evaluate_identity(identity: str, params=None, spec: MBSpec | None = None, *,
                      seed: int | None = None, tolerance: float | None = None,
                      drop_sign: bool = False, force_mu=None,
                      sampler_opts=None) -> VerificationReport:
    """Evaluate both sides of a registered identity and report the residual."""
    if identity not in REGISTRY:
        raise UnknownIdentity(identity)
    desc = REGISTRY[identity]
    if params is None:
        if seed is None:
            raise ValueError("provide params or a seed")
        params = sample_params(identity, seed, **(sampler_opts or {}))
    spec = spec or MBSpec(n_max=desc.n_max_default)
    tol = desc.tolerance if tolerance is None else float(tolerance)
    t0 = time.perf_counter()
    lhs, rhs, trunc = desc.evaluator(params, spec, drop_sign, force_mu)
    dt = int(round((time.perf_counter() - t0) * 1000))
    lhs, rhs = complex(lhs), complex(rhs)
    resid = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return VerificationReport(identity=identity, params=params, lhs=lhs, rhs=rhs,
                              rel_residual=resid, truncation=trunc or Truncation(),
                              elapsed_ms=dt, tolerance=tol, passed=resid <= tol)
