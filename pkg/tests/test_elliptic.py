"""Elliptic gamma and circle beta integrals."""
import numpy as np
import pytest

from sfkit import (
    EllipticBase,
    VParams,
    elliptic_beta_lhs,
    elliptic_beta_rhs,
    elliptic_gamma,
    q_pochhammer_inf,
    v_function,
)
from sfkit.elliptic import circle_beta_adaptive, v_function_adaptive
from sfkit.errors import BalancingViolated, ContourPinch, PoleHit
from sfkit.identities import sample_params


def test_reflection_pair():
    base = EllipticBase(0.2, 0.3)
    z = 0.3 + 0.2j
    prod = elliptic_gamma(z, base) * elliptic_gamma(base.p * base.q / z, base)
    assert abs(prod - 1) < 1e-13


def test_symmetric_point_is_one():
    base = EllipticBase(0.2, 0.3)
    z = np.sqrt(base.p * base.q)
    assert abs(elliptic_gamma(z, base) - 1) < 1e-13


def test_single_base_limit():
    # without the first base the double product collapses to 1/(z;q)_inf
    base = EllipticBase(0.0, 0.4)
    z = 0.35 - 0.15j
    assert abs(elliptic_gamma(z, base) - 1 / q_pochhammer_inf(z, 0.4)) < 1e-13


def test_pole_guard():
    base = EllipticBase(0.2, 0.3)
    with pytest.raises(PoleHit):
        elliptic_gamma(1.0, base)


def test_beta_symmetric_point():
    p, q = 0.15, 0.25
    base = EllipticBase(p, q)
    t = [(p * q) ** (1 / 6)] * 6
    lhs = elliptic_beta_lhs(t, base)
    rhs = elliptic_gamma((p * q) ** (1 / 3), base) ** 15
    assert abs(lhs - rhs) / abs(rhs) < 1e-12
    assert abs(elliptic_beta_rhs(t, base) - rhs) / abs(rhs) < 1e-13


def test_beta_random_draw_and_permutation():
    params = sample_params("elliptic_beta", 7)
    lhs = elliptic_beta_lhs(params.t, params.base)
    rhs = elliptic_beta_rhs(params.t, params.base)
    assert abs(lhs - rhs) / abs(rhs) < 1e-9
    perm = (params.t[3], params.t[0], params.t[5], params.t[2], params.t[4],
            params.t[1])
    assert abs(elliptic_beta_rhs(perm, params.base) - rhs) / abs(rhs) < 1e-12
    assert abs(elliptic_beta_lhs(perm, params.base) - lhs) / abs(lhs) < 1e-11


def test_trapezoid_doubling_stability():
    params = sample_params("elliptic_beta", 3)
    v1 = elliptic_beta_lhs(params.t, params.base, nodes=1024)
    v2 = elliptic_beta_lhs(params.t, params.base, nodes=2048)
    assert abs(v1 - v2) / abs(v1) < 1e-10


def test_balancing_guard():
    base = EllipticBase(0.15, 0.25)
    with pytest.raises(BalancingViolated):
        elliptic_beta_lhs([0.3] * 6, base)
    with pytest.raises(BalancingViolated):
        VParams((0.3,) * 8, base)


def test_contour_pinch_guard():
    base = EllipticBase(0.15, 0.25)
    t = [0.96, 0.2, 0.2, 0.2, 0.2, base.p * base.q / (0.96 * 0.2 ** 4)]
    with pytest.raises(ContourPinch):
        circle_beta_adaptive(t, base)


def test_v_s8_symmetry():
    params = sample_params("v_trafo_1", 2)
    vp = VParams(params.t, params.base)
    v1 = v_function(vp, 1024)
    perm = tuple(np.array(params.t)[[5, 2, 7, 0, 3, 6, 1, 4]])
    v2 = v_function(VParams(perm, params.base), 1024)
    assert abs(v1 - v2) / abs(v1) < 1e-12


def test_v_adaptive_matches_fixed():
    params = sample_params("v_trafo_2", 4)
    vp = VParams(params.t, params.base)
    va = v_function_adaptive(vp)
    vf = v_function(vp, 4096)
    assert abs(va - vf) / abs(vf) < 1e-10
