"""Scalar special functions: Euler gamma, Pochhammer, q-gamma, Dedekind eta,
the complex-field gamma, and single-valued bracket powers."""
from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma as _loggamma

from .errors import (
    DivisionByZero,
    ModulusNotLessThanOne,
    NotInUpperHalfPlane,
    PoleAtLatticePoint,
    PoleAtNonPositiveInteger,
    PoleAtQLattice,
    ProductNotConvergent,
    ZeroBase,
)

# Lanczos, g = 607/128 with 15 coefficients (classic double-precision set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 3.3994649984811888699e-5, 4.6523628927048575665e-5,
    -9.8374475304879564677e-5, 1.5808870322491248884e-4, -2.1026444172410488319e-4,
    2.1743961811521264320e-4, -1.6431810653676389022e-4, 8.4418223983852743293e-5,
    -2.6190838401581408670e-5, 3.6899182659531622704e-6,
)
_SQRT_2PI = math.sqrt(2 * math.pi)
_QPOCH_CAP = 10 ** 6
_QPOCH_EPS = 1e-17


def euler_gamma(z) -> complex:
    """Euler gamma via Lanczos with reflection for Re z < 1/2."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == int(z.real):
        raise PoleAtNonPositiveInteger(f"gamma pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * euler_gamma(1 - z))
    z -= 1
    a = _LANCZOS_C[0]
    for k, c in enumerate(_LANCZOS_C[1:], start=1):
        a += c / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * cmath.exp(-t) * a


def pochhammer(a, n: int) -> complex:
    """Two-sided Pochhammer symbol (a)_n with (a)_0 = 1."""
    a = complex(a)
    if n == 0:
        return 1.0 + 0.0j
    if n > 0:
        v = 1.0 + 0.0j
        for k in range(n):
            v *= a + k
        return v
    v = 1.0 + 0.0j
    for k in range(1, -n + 1):
        d = a - k
        if d == 0:
            raise DivisionByZero(f"(a)_n with n={n} hits zero factor at a-{k}")
        v /= d
    return v


@dataclass(frozen=True)
class FieldGammaArg:
    """Argument (x, n) of the complex-field gamma, alpha = (n+ix)/2."""
    x: complex
    n: int

    @property
    def alpha(self) -> complex:
        return (self.n + 1j * self.x) / 2

    @property
    def alpha_prime(self) -> complex:
        return (-self.n + 1j * self.x) / 2

    @classmethod
    def from_alphas(cls, alpha, alpha_prime) -> "FieldGammaArg":
        n = alpha - alpha_prime
        if abs(n.imag) > 1e-9 or abs(n.real - round(n.real)) > 1e-9:
            raise ValueError("alpha - alpha_prime must be an integer")
        return cls(x=-1j * (alpha + alpha_prime), n=int(round(n.real)))


def _field_gamma_lattice(x: complex, n: int):
    """Classify (x, n) against the true pole/zero lattices of the field gamma.

    Poles sit at x = i(|n| + 2k), zeros at x = -i(|n| + 2 + 2k), k >= 0.
    """
    t = -1j * x  # poles at t = |n| + 2k, zeros at t = -(|n| + 2 + 2k)
    if abs(t.imag) < 1e-12:
        tr = t.real
        if tr >= abs(n) - 1e-12:
            k = (tr - abs(n)) / 2
            if abs(k - round(k)) * 2 < 1e-12 and round(k) >= 0:
                return "pole"
        if tr <= -(abs(n) + 2) + 1e-12:
            k = (-tr - abs(n) - 2) / 2
            if abs(k - round(k)) * 2 < 1e-12 and round(k) >= 0:
                return "zero"
    return None


def field_gamma(arg, n: int | None = None) -> complex:
    """Complex-field gamma: Gamma(alpha) / Gamma(1 - alpha') with alpha-alpha' = n."""
    if n is not None:
        arg = FieldGammaArg(complex(arg), int(n))
    x, m = complex(arg.x), int(arg.n)
    kind = _field_gamma_lattice(x, m)
    if kind == "pole":
        raise PoleAtLatticePoint(f"field gamma pole at x={x}, n={m}")
    if kind == "zero":
        return 0.0 + 0.0j
    a = (m + 1j * x) / 2
    b = 1 - a + m  # = 1 - alpha'
    # formal pole/zero pairs off the true lattices cancel; take the limit there
    a_int = abs(a.imag) < 1e-13 and abs(a.real - round(a.real)) < 1e-13 and a.real <= 0
    b_int = abs(b.imag) < 1e-13 and abs(b.real - round(b.real)) < 1e-13 and b.real <= 0
    if a_int and b_int:
        la, lb = -int(round(a.real)), -int(round(b.real))
        sign = -1.0 if (la + lb) % 2 == 0 else 1.0
        return sign * math.factorial(lb) / math.factorial(la)
    return complex(np.exp(_loggamma(a) - _loggamma(b)))


def log_field_gamma_array(x, n):
    """log of the field gamma, vectorized; no lattice guards (kernel use)."""
    x = np.asarray(x, dtype=complex)
    n = np.asarray(n, dtype=float)
    a = (n + 1j * x) / 2
    return _loggamma(a) - _loggamma(1 - a + n)


def field_gamma_product(args) -> complex:
    """Product of field gammas over a sequence of FieldGammaArg (or (x, n) pairs)."""
    v = 1.0 + 0.0j
    for a in args:
        if not isinstance(a, FieldGammaArg):
            a = FieldGammaArg(complex(a[0]), int(a[1]))
        v *= field_gamma(a)
    return v


def field_gamma_pm(x1, n1, x2, n2) -> complex:
    """Shorthand product over the +- pair of arguments."""
    return field_gamma_product([
        FieldGammaArg(complex(x1) + complex(x2), int(n1 + n2)),
        FieldGammaArg(complex(x1) - complex(x2), int(n1 - n2)),
    ])


def _qpoch_terms(K: int) -> int:
    if K > _QPOCH_CAP:
        raise ProductNotConvergent(f"needs {K} factors, cap is {_QPOCH_CAP}")
    return max(K, 1)


def q_pochhammer_inf(z, q) -> complex:
    """(z; q)_inf for |q| < 1, truncated at |z q^k| < 1e-17."""
    q = complex(q)
    if abs(q) >= 1:
        raise ModulusNotLessThanOne(f"|q| = {abs(q)} >= 1")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    if zmax == 0.0:
        return 1.0 + 0.0j if scalar else np.ones_like(z)
    K = _qpoch_terms(int(math.ceil(
        (math.log(_QPOCH_EPS) - math.log(zmax)) / math.log(abs(q)))) + 1)
    if scalar and K > 4000:
        # near |q| = 1 the long product loses digits; go through the log form
        return complex(np.exp(log_q_pochhammer_inf(z.reshape(1), q)[0]))
    v = np.ones_like(z, dtype=complex)
    zz = z.copy()
    for _ in range(K):
        v = v * (1 - zz)
        zz = zz * q
    return complex(v) if scalar else v


def log_q_pochhammer_inf(z, q):
    """log (z; q)_inf accumulated termwise; tolerates |z| >> 1 factors.

    Scalar arguments take an exactly-summed path with drift-free powers,
    which keeps 12+ digits out to |q| = 0.999.
    """
    q = complex(q)
    if abs(q) >= 1:
        raise ModulusNotLessThanOne(f"|q| = {abs(q)} >= 1")
    z = np.asarray(z, dtype=complex)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    if zmax == 0.0:
        return np.zeros_like(z)
    if not math.isfinite(zmax):
        raise ProductNotConvergent("non-finite product argument")
    K = _qpoch_terms(int(math.ceil(
        (math.log(_QPOCH_EPS) - max(math.log(zmax), 0.0))
        / math.log(abs(q)))) + 1)
    if z.size == 1:
        ks = np.arange(K)
        terms = np.log1p(-z.ravel()[0] * np.exp(ks * cmath.log(q)))
        total = complex(math.fsum(terms.real), math.fsum(terms.imag))
        return np.full_like(z, total)
    acc = np.zeros_like(z, dtype=complex)
    zz = z.copy()
    for _ in range(K):
        acc = acc + np.log1p(-zz)
        zz = zz * q
    return acc


def q_gamma(x, q) -> complex:
    """Trigonometric q-gamma: (q;q)_inf (1-q)^(1-x) / (q^x;q)_inf."""
    x, q = complex(x), complex(q)
    if abs(q) >= 1:
        raise ModulusNotLessThanOne(f"|q| = {abs(q)} >= 1")
    qx = cmath.exp(x * cmath.log(q))
    # (q^x; q) vanishes iff q^(x+k) = 1 for some k >= 0
    probe = qx
    for _ in range(64):
        if abs(1 - probe) < 1e-13:
            raise PoleAtQLattice(f"q-gamma pole: q^x on the inverse lattice of q")
        if abs(probe) < 1e-13:
            break
        probe *= q
    # in log space: both products underflow double precision as |q| -> 1
    log_num = complex(log_q_pochhammer_inf(np.array([q]), q)[0]) \
        + (1 - x) * cmath.log(1 - q)
    log_den = complex(log_q_pochhammer_inf(np.array([qx]), q)[0])
    return cmath.exp(log_num - log_den)


def dedekind_eta(tau) -> complex:
    """Dedekind eta on the upper half plane."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise NotInUpperHalfPlane(f"Im tau = {tau.imag} <= 0")
    q = cmath.exp(2j * math.pi * tau)
    return cmath.exp(1j * math.pi * tau / 12) * q_pochhammer_inf(q, q)


@dataclass(frozen=True)
class BracketExponent:
    """Exponent pair (alpha | alpha') with integer difference n = alpha - alpha'."""
    alpha: complex
    alpha_prime: complex

    def __post_init__(self):
        d = complex(self.alpha) - complex(self.alpha_prime)
        if abs(d.imag) > 1e-9 or abs(d.real - round(d.real)) > 1e-9:
            raise ValueError("alpha - alpha_prime must be an integer")

    @property
    def n(self) -> int:
        return int(round((complex(self.alpha) - complex(self.alpha_prime)).real))

    def shifted(self, d) -> "BracketExponent":
        return BracketExponent(self.alpha + d, self.alpha_prime + d)


def bracket_power(z, e: BracketExponent):
    """Single-valued bracket power |z|^(2 alpha') z^n; vectorized over z."""
    zs = np.asarray(z, dtype=complex)
    scalar = zs.ndim == 0
    zs = np.atleast_1d(zs)
    if np.any(zs == 0):
        eff = complex(e.alpha) + complex(e.alpha_prime)
        if eff.real <= 0:
            raise ZeroBase("bracket power of 0 with Re(alpha+alpha') <= 0")
        out = np.zeros_like(zs)
        nz = zs != 0
        out[nz] = np.exp(2 * complex(e.alpha_prime) * np.log(np.abs(zs[nz]))) \
            * zs[nz] ** e.n
        return complex(out[0]) if scalar else out
    out = np.exp(2 * complex(e.alpha_prime) * np.log(np.abs(zs))) * zs ** e.n
    return complex(out[0]) if scalar else out
