"""Parameter maps for the radial eigenproblem and its normal forms.

The chain implemented here is

    PhysicalParams --> RadialCoefficients --> HeunParams

together with the clean three-parameter form (``RadialModel``) used by the
series and variational machinery.  All maps are pure value transformations;
the coefficient evaluators at the bottom let tests verify that the mapped
parameter sets reproduce the exact same differential equation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = [
    "PhysicalParams",
    "RadialCoefficients",
    "HeunParams",
    "RadialModel",
    "radial_from_physical",
    "indicial_exponent",
    "heun_from_radial",
    "shifted_ode_coefficients",
    "heun_ode_coefficients",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Raw inputs of the disclination model (units with hbar = c = 1).

    Attributes
    ----------
    ell : int
        Angular quantum number.
    alpha : float
        Disclination parameter; must be nonzero.
    mass : float
        Particle mass.
    a1, a2, a3, a4 : float
        Potential coefficients.  ``a2`` is carried for completeness but does
        not enter the radial coefficients.
    eta : float
        Positive scale parameter.
    kappa : float
        Real separation parameter.
    """

    ell: int
    alpha: float
    mass: float
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    a4: float = 0.0
    eta: float = 1.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if self.eta <= 0:
            raise ValueError("eta must be positive")


@dataclass(frozen=True)
class RadialCoefficients:
    """Coefficients of the dimensionless radial equation

        u'' + u'/r - v_m2/r^2 u + v_m1/r u - v_p1 r u - r^2 u + W u = 0.

    ``v_m2`` must be non-negative so that the indicial exponent sqrt(v_m2)
    is real.
    """

    v_m2: float
    v_m1: float
    v_p1: float
    w: float

    def __post_init__(self):
        if self.v_m2 < 0:
            raise ValueError("v_m2 must be non-negative (real indicial exponent)")


@dataclass(frozen=True)
class HeunParams:
    """Parameters (a, b, c, d) of the biconfluent-Heun normal form

        H'' + [(1+a)/x - 2x - b] H' + [c - 2 - a - (b(a+1) + d)/(2x)] H = 0,

    valid on the physically acceptable branch a > 0 where |a+1| = a+1.
    a = 0 (a double indicial root) is representable but degenerate; the map
    from radial coefficients warns when producing it.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a < 0:
            raise ValueError(f"require a >= 0 (got a={self.a!r})")


@dataclass(frozen=True)
class RadialModel:
    """Three-parameter model

        u'' + u'/x - gamma^2/x^2 u - a/x u - b x u - x^2 u + W u = 0

    with indicial exponent s = |gamma| (derived, never stored)."""

    gamma: float
    a: float
    b: float

    @property
    def s(self) -> float:
        return abs(self.gamma)


def radial_from_physical(p: PhysicalParams) -> RadialCoefficients:
    """Reduce the physical parameter set to the four radial coefficients."""
    sqrt_eta = math.sqrt(p.eta)
    return RadialCoefficients(
        v_m2=(p.ell / p.alpha) ** 2 + 2.0 * p.mass * p.a4,
        v_m1=2.0 * p.mass * p.a3 / sqrt_eta,
        v_p1=2.0 * p.mass * p.a1 / p.eta ** 1.5,
        w=p.kappa ** 2 / p.eta,
    )


def indicial_exponent(rc: RadialCoefficients) -> float:
    """Exponent s of the regular solution u ~ r^s at the origin: s = sqrt(v_m2)."""
    if rc.v_m2 < 0:
        raise ValueError("complex indicial exponent: v_m2 < 0")
    return math.sqrt(rc.v_m2)


def heun_from_radial(rc: RadialCoefficients) -> HeunParams:
    """Map radial coefficients to the biconfluent-Heun parameters.

    Derived by matching the ODE for h(r) = u(r) / [r^s exp(-v_p1 r/2 - r^2/2)]
    term by term against the Heun normal form:

        a = 2 sqrt(v_m2),  b = v_p1,  c = W + v_p1^2/4,  d = -2 v_m1.

    The a = 0 case (s = 0) is a degenerate boundary of the a > 0 branch and
    is flagged with a warning rather than rejected.
    """
    if rc.v_m2 < 0:
        raise ValueError("complex indicial exponent: v_m2 < 0")
    a = 2.0 * math.sqrt(rc.v_m2)
    if a == 0.0:
        warnings.warn("degenerate Heun parameter a = 0; |a+1| branch condition "
                      "holds only marginally", stacklevel=2)
    return HeunParams(a=a, b=rc.v_p1, c=rc.w + rc.v_p1 ** 2 / 4.0, d=-2.0 * rc.v_m1)


def shifted_ode_coefficients(rc: RadialCoefficients, r: float) -> tuple[float, float]:
    """Coefficients (p, q) of h'' + p h' + q h = 0 for the shifted function
    h = u / [r^s exp(-v_p1 r/2 - r^2/2)], with s the indicial exponent."""
    s = indicial_exponent(rc)
    p = (2.0 * s + 1.0) / r - 2.0 * r - rc.v_p1
    q = ((2.0 * rc.v_m1 - rc.v_p1 * (2.0 * s + 1.0)) / (2.0 * r)
         + rc.v_p1 ** 2 / 4.0 - 2.0 * s - 2.0 + rc.w)
    return p, q


def heun_ode_coefficients(hp: HeunParams, x: float) -> tuple[float, float]:
    """Coefficients (p, q) of the Heun normal form H'' + p H' + q H = 0
    on the branch |a+1| = a+1."""
    p = (1.0 + hp.a) / x - 2.0 * x - hp.b
    q = hp.c - 2.0 - hp.a - (hp.b * (hp.a + 1.0) + hp.d) / (2.0 * x)
    return p, q
