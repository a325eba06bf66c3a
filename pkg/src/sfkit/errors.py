"""Exception hierarchy for sfkit."""


class SfkitError(Exception):
    """Base class for all sfkit errors."""


# --- quadrature / summation engine ---

class NonConvergence(SfkitError):
    """Subdivision or probing budget exhausted before reaching tolerance."""


class SingularOnContour(SfkitError):
    """Integrand evaluated non-finite at a quadrature node."""


class TailDiverging(SfkitError):
    """Bilateral-sum terms not decreasing at the truncation cutoff."""


class NonIntegrableSingularity(SfkitError):
    """Declared local exponent <= -2; the plane integral diverges."""


class InsufficientSamples(SfkitError):
    """Richardson extrapolation needs at least two distinct step sizes."""


# --- scalar special functions ---

class PoleAtNonPositiveInteger(SfkitError):
    """Euler gamma evaluated at 0, -1, -2, ..."""


class DivisionByZero(SfkitError):
    """Two-sided Pochhammer hit a zero factor for n < 0."""


class PoleAtLatticePoint(SfkitError):
    """Complex-field gamma evaluated at a point of its pole lattice."""


class ModulusNotLessThanOne(SfkitError):
    """q-product base with |q| >= 1."""


class ProductNotConvergent(SfkitError):
    """Infinite product truncation cap reached before the term threshold."""


class PoleAtQLattice(SfkitError):
    """q-gamma evaluated where (q^x; q)_inf vanishes."""


class NotInUpperHalfPlane(SfkitError):
    """Dedekind eta argument with Im(tau) <= 0."""


class ZeroBase(SfkitError):
    """Bracket power of zero with non-positive effective exponent."""


class PoleHit(SfkitError):
    """Evaluation inside the guard radius of a pole lattice point."""


class OutsideConvergenceStrip(SfkitError):
    """Hyperbolic gamma integral representation outside its domain."""


class OutsideCone(SfkitError):
    """Asymptotic phase requested outside the stated angular region."""


# --- identity engine ---

class BalancingViolated(SfkitError):
    """Parameters do not satisfy the identity's balancing constraint."""


class ContourPinch(SfkitError):
    """Pole sequences approach the integration contour too closely."""


class UnknownIdentity(SfkitError):
    """Identity id not present in the registry."""


class UnknownFunction(SfkitError):
    """CLI eval name not present in the function table."""
