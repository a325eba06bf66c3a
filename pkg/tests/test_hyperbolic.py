"""Hyperbolic gamma: representations, normalization, asymptotics, poles."""
import cmath
import math

import numpy as np
import pytest

from sfkit import (
    ModularPair,
    asymptotic_phase,
    bernoulli_b22,
    enumerate_poles,
    gamma2,
    gamma_h_integral,
    gamma_h_product,
)
from sfkit.errors import (
    OutsideCone,
    OutsideConvergenceStrip,
    PoleHit,
    ProductNotConvergent,
)
from sfkit.hyperbolic import HyperbolicPoleSet, log_gamma2_array

# frozen 40-digit product values
GAMMA_H_07 = 0.50262439689414570682 - 0.13095193937144329018j        # (1, 1+i), u=0.7
GAMMA_H_0301 = 0.76017045125492848472 + 0.3377456328108464333j      # (1, e^{i pi/5})

W5 = cmath.exp(1j * math.pi / 5)


def test_b22_values():
    mp = ModularPair(1.0, 1.0)
    assert abs(bernoulli_b22(mp.Q / 2, mp) - (-1 / 6)) < 1e-15
    # the displayed formula gives 5/6 at u=0 for the unit pair
    assert abs(bernoulli_b22(0.0, mp) - 5 / 6) < 1e-15
    mp2 = ModularPair(1.0, W5)
    u = 0.3 + 0.2j
    assert abs(bernoulli_b22(u, mp2) - bernoulli_b22(mp2.Q - u, mp2)) < 1e-14


def test_modular_pair_conventions():
    mp = ModularPair(1.0, 1 + 1j)       # Im(w1/w2) < 0: swapped
    assert mp.convention == "swapped"
    assert abs(mp.q) < 1 and abs(mp.qt) < 1 and mp.product_valid
    mp2 = ModularPair(1 + 1j, 1.0)
    assert mp2.convention == "standard"
    mp3 = ModularPair(1.0, 1.3)
    assert mp3.convention == "unimodular"
    assert not mp3.product_valid
    with pytest.raises(ValueError):
        ModularPair(0.0, 1.0)


def test_product_form_frozen_values():
    v = gamma_h_product(0.7, ModularPair(1.0, 1 + 1j))
    assert abs(v - GAMMA_H_07) / abs(GAMMA_H_07) < 1e-13
    v2 = gamma_h_product(0.3 + 0.1j, ModularPair(1.0, W5))
    assert abs(v2 - GAMMA_H_0301) / abs(GAMMA_H_0301) < 1e-13


def test_omega_swap_symmetry():
    u = 0.4 + 0.2j
    a = gamma_h_product(u, ModularPair(1.0, W5))
    b = gamma_h_product(u, ModularPair(W5, 1.0))
    assert abs(a - b) / abs(a) < 1e-12


def test_functional_equation():
    # shifting by omega1 multiplies by (1 - e^{2 pi i u / omega2})
    mp = ModularPair(1.0, W5)
    u = 0.31 + 0.17j
    ratio = gamma_h_product(u + mp.omega1, mp) / gamma_h_product(u, mp)
    expect = 1 - cmath.exp(2j * math.pi * u / mp.omega2)
    assert abs(ratio - expect) / abs(expect) < 1e-12


def test_product_guards():
    with pytest.raises(ProductNotConvergent):
        gamma_h_product(0.5, ModularPair(1.0, 1.3))
    with pytest.raises(PoleHit):
        gamma_h_product(-1.0 - W5, ModularPair(1.0, W5))


def test_integral_at_unimodular_pair():
    # |q| = 1 case where the product fails; value at the symmetric point
    mp = ModularPair(1.0, 1.0)
    v = gamma_h_integral(1.0, mp)
    assert abs(v - cmath.exp(-1j * math.pi / 12)) < 1e-10
    assert abs(gamma2(mp.Q / 2, mp) - 1) < 1e-10


def test_integral_strips():
    mp = ModularPair(1.0, 1 + 1j)
    with pytest.raises(OutsideConvergenceStrip):
        gamma_h_integral(-0.5, mp)
    # negative-parts strip plus inversion bookkeeping: the residue of the
    # regularized model turns the contour flip into a Bernoulli phase
    mpn = ModularPair(-1.0, -1 - 1j)
    g_neg = gamma_h_integral(-0.7, mpn)
    g_pos = gamma_h_integral(0.7, mp)
    pred = cmath.exp(1j * math.pi * complex(bernoulli_b22(0.7, mp)))
    assert abs(g_neg * g_pos - pred) < 1e-12
    # on-axis ladder (mixed strip) against the product form
    for w2 in (1j, -1j):
        mpm = ModularPair(1.0, w2)
        gi = gamma_h_integral(0.3 + 0.1j, mpm)
        gp = gamma_h_product(0.3 + 0.1j, mpm)
        assert abs(gi - gp) / abs(gp) < 1e-10


def test_cross_representation_agreement():
    mp = ModularPair(1.0, W5)
    for u in (0.3 + 0.1j, 0.9 - 0.3j, 1.4 + 0.4j):
        gi = gamma_h_integral(u, mp)
        gp = gamma_h_product(u, mp)
        assert abs(gi - gp) / abs(gp) < 1e-10


def test_gamma2_scaling_invariance():
    rng = np.random.default_rng(2)
    mp = ModularPair(1.0, W5)
    for _ in range(20):
        u = complex(rng.uniform(0.1, 1.5), rng.uniform(-0.4, 0.4))
        lam = complex(rng.uniform(0.5, 2.5), rng.uniform(-1.0, 1.0))
        if abs(lam) < 0.2:
            continue
        a = gamma2(u, mp)
        b = gamma2(lam * u, ModularPair(lam * mp.omega1, lam * mp.omega2))
        assert abs(a - b) / abs(a) < 1e-10


def test_gamma2_reflection():
    rng = np.random.default_rng(4)
    mp = ModularPair(1.0, W5)
    for _ in range(20):
        u = complex(rng.uniform(0.1, 1.6), rng.uniform(-0.4, 0.4))
        prod = gamma2(u, mp) * gamma2(mp.Q - u, mp)
        assert abs(prod - 1) < 1e-10


def test_gamma2_symmetric_point():
    mp = ModularPair(1.0, cmath.exp(1j * math.pi / 3))
    assert abs(gamma2(mp.Q / 2, mp) - 1) < 1e-12


def test_pole_guard_near_origin():
    mp = ModularPair(1.0, W5)
    with pytest.raises(PoleHit):
        gamma_h_product(1e-9, mp)


def test_asymptotic_phase_regions():
    mp = ModularPair(1.0, cmath.exp(1j * math.pi / 4))
    a = asymptotic_phase(30j, mp, "A")
    assert abs(a - 1) < 1e-6
    b = asymptotic_phase(-30j * cmath.exp(1j * math.pi / 8), mp, "B")
    assert abs(b - 1) < 1e-6
    # corrections decay like exp(-2 pi R Im-parts); pick radii where they are
    # still above double rounding so the monotone approach is measurable
    errs = [abs(asymptotic_phase(1j * R, mp, "A") - 1) for R in (0.6, 1.0, 1.6)]
    assert errs[0] > errs[1] > errs[2]
    assert abs(asymptotic_phase(40j, mp, "A") - 1) < 1e-12
    with pytest.raises(OutsideCone):
        asymptotic_phase(-10j, mp, "A")


def test_combined_kernel_decay_rate():
    # the balanced six-pair kernel decays like exp(-2 pi Q t / sqrt(w1 w2));
    # the naive per-factor estimate (three times faster) does not match
    mp = ModularPair(1.0, W5)
    sq = mp.sqrt_w12
    g = [mp.Q / 6] * 6

    def log_kernel(t):
        z = np.array([1j * sq * t])
        acc = 0.0 + 0.0j
        for gk in g:
            acc += log_gamma2_array(gk + z, mp)[0] + log_gamma2_array(gk - z, mp)[0]
        acc -= log_gamma2_array(2 * z, mp)[0] + log_gamma2_array(-2 * z, mp)[0]
        return acc.real

    slope = (log_kernel(3.0) - log_kernel(2.0)) / 1.0
    expected = -2 * math.pi * (mp.Q / sq).real
    assert abs(slope - expected) / abs(expected) < 0.02
    assert abs(slope - 3 * expected) / abs(3 * expected) > 0.5


def test_enumerate_poles():
    mp = ModularPair(1.0, 2.0)
    up = enumerate_poles(0.0, mp, "up", 3)
    assert [round(p.real) for p in up] == [0, 1, 2]
    g = 0.3 + 0.1j
    down = enumerate_poles(g, mp, "down", 3)
    assert abs(down[0] + g) < 1e-14
    assert abs(down[1] + g + 1) < 1e-14
    ps = HyperbolicPoleSet(g, mp, "up").points(4)
    assert abs(ps[0] - g) < 1e-14


def test_pole_separation_for_contour():
    # sampled shifts keep every pole a finite distance from the t-axis image
    mp = ModularPair(1.0, W5)
    g = mp.Q / 6
    pts = enumerate_poles(g, mp, "up", 10)
    dists = [abs((p / mp.sqrt_w12).real) for p in pts]
    assert min(dists) > 1e-3
