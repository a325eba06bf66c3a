"""sfkit: the gamma-function hierarchy and numerical beta-integral verification.

Layers:

* ``numerics``   adaptive complex quadrature, bilateral sums, plane integrals
* ``gamma_core`` Euler/q-/complex-field gammas, eta, bracket powers
* ``hyperbolic`` modular quantum dilogarithm in both representations
* ``elliptic``   elliptic gamma and circle beta integrals
* ``identities`` registry of exact identities + verification entry point
* ``limits``     degeneration-limit sweeps between the levels
"""

__version__ = "0.1.0"

from .numerics import (  # noqa: F401
    LineContour,
    MBSpec,
    PlaneWindow,
    QuadratureSpec,
    Truncation,
    bilateral_sum,
    integrate_line,
    integrate_plane,
    richardson_extrapolate,
)
from .gamma_core import (  # noqa: F401
    BracketExponent,
    FieldGammaArg,
    bracket_power,
    dedekind_eta,
    euler_gamma,
    field_gamma,
    field_gamma_pm,
    field_gamma_product,
    pochhammer,
    q_gamma,
    q_pochhammer_inf,
)
from .hyperbolic import (  # noqa: F401
    HyperbolicPoleSet,
    ModularPair,
    asymptotic_phase,
    bernoulli_b22,
    enumerate_poles,
    gamma2,
    gamma_h,
    gamma_h_integral,
    gamma_h_product,
)
from .elliptic import (  # noqa: F401
    EllipticBase,
    VParams,
    elliptic_beta_lhs,
    elliptic_beta_rhs,
    elliptic_gamma,
    v_function,
)
from .identities import (  # noqa: F401
    ComplexMBParams,
    EllipticParams,
    HyperbolicParams,
    PlaneParams,
    VerificationReport,
    evaluate_identity,
    list_identities,
    sample_params,
)
from .limits import (  # noqa: F401
    DeltaSweep,
    elliptic_to_hyperbolic_ratio,
    eta_ratio_limit,
    limit_b_to_1,
    limit_b_to_i,
)
