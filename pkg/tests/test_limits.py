"""Degeneration-limit sweeps and their bookkeeping."""
import cmath
import math

import numpy as np
import pytest

from sfkit import (
    ModularPair,
    elliptic_to_hyperbolic_ratio,
    eta_ratio_limit,
    gamma2,
    limit_b_to_1,
    limit_b_to_i,
    pochhammer,
    richardson_extrapolate,
)
from sfkit.errors import PoleHit
from sfkit.limits import DEFAULT_DELTAS, FINE_DELTAS, delta_power_bookkeeping

# gamma2 ratio at delta = 1e-4 (n=0, x=0.4-0.7i), frozen from a 40-digit run
B2I_RATIO_1E4 = 0.999826497713442 + 0.000287930432815673j


def test_b_to_i_basic_sweep():
    s = limit_b_to_i(0, -1j, DEFAULT_DELTAS)
    errs = s.abs_errors
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 0.05


def test_b_to_i_nonzero_sectors():
    for n in (1, -1):
        s = limit_b_to_i(n, 0.3 - 0.6j, (0.05, 0.035, 0.025))
        errs = s.abs_errors
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] < 0.08


def test_b_to_i_small_delta_vs_frozen():
    s = limit_b_to_i(0, 0.4 - 0.7j, (2e-4, 1e-4))
    assert abs(s.ratios[-1] - B2I_RATIO_1E4) < 2e-9


def test_b_to_i_zero_target_guard():
    with pytest.raises(PoleHit):
        limit_b_to_i(0, -2j, (0.1, 0.05))  # target on the zero lattice


def test_negative_branch_equivalent_by_scaling():
    # the opposite-sign branch maps onto the standard one through the exact
    # scale invariance gamma2(-u; -w1, -w2) = gamma2(u; w1, w2)
    d = 0.05
    b = 1j + d
    mp_pos = ModularPair(b, 1 / b)
    mp_neg = ModularPair(-b, -1 / b)
    u = 1j * (1 + (0.3 - 0.6j) * d)
    assert abs(gamma2(-u, mp_neg) - gamma2(u, mp_pos)) < 1e-12


def test_b_to_1_targets_and_sweeps():
    # n=0: the empty product makes the target exactly 1
    s0 = limit_b_to_1(0, 1.0, (0.1, 0.05, 0.025))
    assert all(e2 < e1 for e1, e2 in zip(s0.abs_errors, s0.abs_errors[1:]))
    assert s0.abs_errors[-1] < 0.03
    # n=1, y=1: the closed form of the target
    d = 0.05
    tgt = cmath.exp(-1j * math.pi / 2) * (4 * math.pi * d) * (-0.5j)
    b = 1 + 1j * d
    val = gamma2(2 + d, ModularPair(b, 1 / b))
    assert abs(val / tgt - 1) < 0.2
    # n=-1 exercises the reciprocal-product branch
    assert abs(pochhammer((1 + 1 - 1j) / 2, -1)
               - 1 / ((2 - 1j) / 2 - 1)) < 1e-14
    sm = limit_b_to_1(-1, 1.0, (0.1, 0.05, 0.025))
    assert all(e2 < e1 for e1, e2 in zip(sm.abs_errors, sm.abs_errors[1:]))


def test_b_to_1_fitted_order():
    s = limit_b_to_1(1, 1.0, DEFAULT_DELTAS)
    assert s.fitted_order > 0.9


def test_fine_sweep_orders():
    s = limit_b_to_i(1, 0.3 - 0.6j, FINE_DELTAS)
    assert s.fitted_order >= 0.85


def test_eta_ratio_both_modes():
    s = eta_ratio_limit((0.05,), mode="b_to_i")
    assert s.abs_errors[0] < 0.05
    s2 = eta_ratio_limit((0.05,), mode="b_to_1")
    assert s2.abs_errors[0] < 0.05
    # the naive termwise cancellation would give 1; the true limit phase is
    # a twelfth root of unity, so the raw ratio must stay away from 1
    raw = s.ratios[0] * cmath.exp(1j * math.pi / 12)
    assert abs(raw - 1) > 0.2


def test_eta_ratio_monotone():
    s = eta_ratio_limit((0.08, 0.05, 0.03, 0.02), mode="b_to_i")
    errs = s.abs_errors
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))


def test_elliptic_to_hyperbolic_sweep():
    mp = ModularPair(1.0, 1.3)
    u = 0.48 * mp.Q
    s = elliptic_to_hyperbolic_ratio(u, mp, (0.3, 0.2, 0.1, 0.05))
    errs = s.abs_errors
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 5e-3


def test_elliptic_to_hyperbolic_reflection_pairing():
    # the reflection u <-> Q-u inverts the ratio exactly
    mp = ModularPair(1.0, 1.3)
    u = mp.Q / 3
    r1 = elliptic_to_hyperbolic_ratio(u, mp, (0.1,)).ratios[0]
    r2 = elliptic_to_hyperbolic_ratio(mp.Q - u, mp, (0.1,)).ratios[0]
    assert abs(r1 * r2 - 1) < 1e-9


def test_elliptic_to_hyperbolic_log_space():
    # the diverging prefactor is handled in log space: tiny v works
    mp = ModularPair(1.0, 1.3)
    s = elliptic_to_hyperbolic_ratio(0.48 * mp.Q, mp, (0.02,))
    assert np.isfinite(s.ratios[0])
    assert s.abs_errors[0] < 1e-3


def test_delta_power_bookkeeping():
    # the three families of scale powers cancel exactly: each assembled ratio
    # approaches 1 instead of scaling like a leftover power of the sweep step
    a = [0.1 - 0.4j, -0.2 - 0.3j, 0.15 - 0.35j, -0.05 - 0.25j, 0.0 - 0.35j]
    a.append(-2j - sum(a))
    N = [0, 1, -1, 0, 0, 0]
    big, small = {}, {}
    for d, out in ((0.05, big), (0.01, small)):
        r_k, r_r, r_m = delta_power_bookkeeping(d, a, N, y=0.4, big_n=1)
        out["k"], out["r"], out["m"] = abs(r_k - 1), abs(r_r - 1), abs(r_m - 1)
    for key in ("k", "r", "m"):
        assert big[key] < 0.5          # a stray power would put this at ~5-20
        assert small[key] < big[key]   # and would grow, not shrink, with 1/d


def test_richardson_on_clean_first_order_sweep():
    # the Pochhammer-limit ratio has power-series error in delta, so the
    # extrapolation lands on the limit far below the raw samples
    s = limit_b_to_1(1, 1.0, DEFAULT_DELTAS)
    out = richardson_extrapolate(list(zip(s.deltas, s.ratios)), 1)
    assert abs(out - 1) < 1e-5


def test_richardson_improves_b_to_i_sweep():
    # the log-corrected error of this family resists clean power elimination;
    # extrapolation still beats the smallest raw sample by a wide factor and
    # reaches the accuracy of the frozen direct evaluation at delta = 1e-4
    s = limit_b_to_i(0, 0.4 - 0.7j, FINE_DELTAS)
    out = richardson_extrapolate(list(zip(s.deltas, s.ratios)), 1)
    assert abs(out - 1) < s.abs_errors[-1] / 8
    assert abs(out - 1) < abs(B2I_RATIO_1E4 - 1)
