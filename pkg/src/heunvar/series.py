"""Power-series machinery: three-term recurrences for both normal forms,
series assembly, wavefunction evaluation, and an ODE-residual oracle.

Both recurrences run over j = -1, 0, 1, ... with c_{-1} = 0, c_0 = 1 and

    c_{j+2} = A_j c_{j+1} + B_j c_j.

Internally the series assembly and the residual oracle work in extended
precision (``numpy.longdouble``): the residual of an exactly terminating
solution is zero analytically, so any computed residual is pure roundoff and
must be kept well below the tolerances it is compared against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RadialModel, HeunParams, heun_ode_coefficients

__all__ = [
    "RecurrencePair",
    "heun_recurrence",
    "model_recurrence",
    "truncated_b",
    "build_series",
    "model_series",
    "SeriesAnsatz",
    "eval_wavefunction",
    "ode_residual",
    "heun_series",
    "heun_series_residual",
]

_LD = np.longdouble


@dataclass(frozen=True)
class RecurrencePair:
    """The two multipliers (A_j, B_j) of a three-term recurrence at index j."""

    a_j: float
    b_j: float


def heun_recurrence(hp: HeunParams, j: int) -> RecurrencePair:
    """Recurrence multipliers of the biconfluent-Heun series at index j.

    A_j = [2b(j+1) + b(a+1) + d] / [2(j+2)(j+2+a)]
    B_j = (a - c + 2j + 2) / [(j+2)(j+2+a)]
    """
    if j < -1:
        raise ValueError("recurrence index must be >= -1")
    den = (j + 2) * (j + 2 + hp.a)
    if den == 0:
        raise ZeroDivisionError(f"vanishing recurrence denominator at j={j}, a={hp.a}")
    a_j = (2.0 * hp.b * (j + 1) + hp.b * (hp.a + 1.0) + hp.d) / (2.0 * den)
    b_j = (hp.a - hp.c + 2.0 * j + 2.0) / den
    return RecurrencePair(a_j, b_j)


def model_recurrence(m: RadialModel, w: float, j: int) -> RecurrencePair:
    """Recurrence multipliers of the three-parameter model's series at index j.

    A_j = [2a + b(2j+2s+3)] / [2(j+2)(j+2(s+1))]
    B_j = [4(2j+2s-W+2) - b^2] / [4(j+2)(j+2(s+1))]
    """
    if j < -1:
        raise ValueError("recurrence index must be >= -1")
    s = m.s
    den = (j + 2) * (j + 2.0 * (s + 1.0))
    if den == 0:
        raise ZeroDivisionError(f"vanishing recurrence denominator at j={j}, s={s}")
    a_j = (2.0 * m.a + m.b * (2.0 * j + 2.0 * s + 3.0)) / (2.0 * den)
    b_j = (4.0 * (2.0 * j + 2.0 * s - w + 2.0) - m.b ** 2) / (4.0 * den)
    return RecurrencePair(a_j, b_j)


def truncated_b(n: int, s: float, j: int) -> float:
    """B_j after substituting the terminating energy W = 2(n+s+1) - b^2/4,
    where it collapses to 2(j-n)/[(j+2)(j+2(s+1))], independent of b."""
    return 2.0 * (j - n) / ((j + 2) * (j + 2.0 * (s + 1.0)))


def build_series(rec, j_max: int) -> np.ndarray:
    """Run a recurrence ``rec(j) -> RecurrencePair`` up to c_{j_max}.

    Returns the coefficients [c_0, ..., c_{j_max}] with c_0 = 1.
    """
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    c = np.zeros(j_max + 1)
    c[0] = 1.0
    prev, cur = 0.0, 1.0
    for j in range(-1, j_max - 1):
        pair = rec(j)
        prev, cur = cur, pair.a_j * cur + pair.b_j * prev
        c[j + 2] = cur
    return c


def model_series(m: RadialModel, w: float, j_max: int) -> np.ndarray:
    """Series coefficients for the three-parameter model, accumulated in
    extended precision and returned as float64."""
    return _model_series_ld(m, w, j_max).astype(float)


def _model_series_ld(m: RadialModel, w: float, j_max: int) -> np.ndarray:
    s, a, b, w = _LD(m.s), _LD(m.a), _LD(m.b), _LD(w)
    c = np.zeros(j_max + 1, dtype=_LD)
    c[0] = 1
    prev, cur = _LD(0), _LD(1)
    for j in range(-1, j_max - 1):
        den = _LD(j + 2) * (_LD(j) + 2 * (s + 1))
        a_j = (2 * a + b * (2 * j + 2 * s + 3)) / (2 * den)
        b_j = (4 * (2 * j + 2 * s - w + 2) - b * b) / (4 * den)
        prev, cur = cur, a_j * cur + b_j * prev
        c[j + 2] = cur
    return c


class SeriesAnsatz:
    """Wavefunction u(x) = x^s exp(-b x/2 - x^2/2) P(x) with polynomial P.

    Stores the polynomial coefficients in extended precision and provides
    analytic first and second derivatives, which is what makes the residual
    oracle sharp enough for terminating solutions.
    """

    def __init__(self, m: RadialModel, coeffs):
        self.model = m
        self.coeffs = np.asarray(coeffs, dtype=_LD)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")

    def __call__(self, x: float) -> float:
        return float(self.derivatives(x)[0])

    def derivatives(self, x):
        """(u, u', u'') at x > 0, in extended precision."""
        x = _LD(x)
        s, b = _LD(self.model.s), _LD(self.model.b)
        p = dp = d2p = _LD(0)
        for ck in self.coeffs[::-1]:
            d2p = d2p * x + 2 * dp
            dp = dp * x + p
            p = p * x + ck
        f = x ** s * np.exp(-b * x / 2 - x * x / 2)
        g = s / x - b / 2 - x            # f'/f
        gp = -s / x ** 2 - 1             # (f'/f)'
        u = f * p
        du = f * (g * p + dp)
        d2u = f * ((g * g + gp) * p + 2 * g * dp + d2p)
        return u, du, d2u


def eval_wavefunction(m: RadialModel, coeffs, x: float) -> float:
    """Value of the ansatz x^s exp(-b x/2 - x^2/2) P(x) at x."""
    return SeriesAnsatz(m, coeffs)(x)


def ode_residual(m: RadialModel, w: float, u, x: float) -> float:
    """|u'' + u'/x - gamma^2 u/x^2 - a u/x - b x u - x^2 u + W u| at x > 0.

    If ``u`` is a :class:`SeriesAnsatz` the derivatives are analytic
    (preferred); any other callable is differentiated with fourth-order
    central differences (step 1e-4).
    """
    if x <= 0:
        raise ValueError("residual is defined for x > 0")
    if isinstance(u, SeriesAnsatz):
        xl = _LD(x)
        val, d1, d2 = u.derivatives(x)
        g2, a, b, wl = _LD(m.gamma) ** 2, _LD(m.a), _LD(m.b), _LD(w)
        res = d2 + d1 / xl - (g2 / xl ** 2 + a / xl + b * xl + xl * xl - wl) * val
        return float(abs(res))
    h = 1e-4
    um2, um1, u0, up1, up2 = (u(x - 2 * h), u(x - h), u(x), u(x + h), u(x + 2 * h))
    d1 = (um2 - 8 * um1 + 8 * up1 - up2) / (12 * h)
    d2 = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h)
    res = d2 + d1 / x - (m.gamma ** 2 / x ** 2 + m.a / x + m.b * x + x * x - w) * u0
    return abs(res)


def heun_series(hp: HeunParams, j_max: int) -> np.ndarray:
    """Series coefficients of the regular (x^0) branch of the Heun form."""
    return build_series(lambda j: heun_recurrence(hp, j), j_max)


def heun_series_residual(hp: HeunParams, coeffs, x: float) -> float:
    """Residual of the partial sum H(x) = sum c_j x^j in the Heun normal form."""
    cs = np.asarray(coeffs, dtype=float)
    val = dval = d2val = 0.0
    for ck in cs[::-1]:
        d2val = d2val * x + 2 * dval
        dval = dval * x + val
        val = val * x + ck
    p, q = heun_ode_coefficients(hp, x)
    return abs(d2val + p * dval + q * val)
