"""Terminating-series (conditionally solvable) machinery.

A degree-n polynomial factor exists only when the energy takes the value
W_s^(n) = 2(n+s+1) - b^2/4 *and* the coupling a is a root of c_{n+1}(a, b),
which is a polynomial of degree n+1 in a.  This module builds those
polynomials by exact coefficient-array arithmetic (no sampling), extracts
their real roots, implements the closed-form quadratic/cubic special cases of
the Heun parameterization, and assembles complete eigenpair records.

Roots are refined by a few Newton steps in extended precision so that
terminating solutions rebuilt from them satisfy the original ODE to well
below the acceptance tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import RadialModel
from .series import _model_series_ld

__all__ = [
    "RealPolynomial",
    "TruncationSolution",
    "QuadraticRoots",
    "truncation_energy",
    "truncation_polynomial_in_a",
    "real_roots",
    "grouped_roots",
    "heun_quadratic_roots",
    "heun_cubic",
    "heun_truncation_polynomial",
    "heun_truncation_general",
    "assemble_solution",
    "truncation_family",
]

_LD = np.longdouble

IM_TOL = 1e-9      # |imag| below this (times root scale) counts as real
MERGE_TOL = 1e-8   # roots closer than this (times root scale) merge


def truncation_energy(n: int, s: float, b: float) -> float:
    """Terminating energy W_s^(n) = 2(n+s+1) - b^2/4."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if s < 0:
        raise ValueError("s must be >= 0")
    return 2.0 * (n + s + 1.0) - b * b / 4.0


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial stored by ascending coefficients (extended precision).

    Exact trailing zeros are trimmed so the leading coefficient is nonzero.
    """

    coefficients: np.ndarray

    def __init__(self, coefficients):
        c = np.atleast_1d(np.asarray(coefficients, dtype=_LD))
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = _LD(0)
        for ck in self.coefficients[::-1]:
            acc = acc * _LD(x) + ck
        return float(acc)

    def as_float(self) -> np.ndarray:
        return self.coefficients.astype(float)


def _padded_sum(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.zeros(max(len(p), len(q)), dtype=_LD)
    out[: len(p)] += p
    out[: len(q)] += q
    return out


def truncation_polynomial_in_a(n: int, s: float, b: float) -> RealPolynomial:
    """c_{n+1} as a degree-(n+1) polynomial in the coupling a.

    The series recurrence at the terminating energy has multipliers that are
    affine in a, so running it with ascending coefficient arrays (product by
    convolution) yields c_{n+1}(a) exactly, up to extended-precision roundoff.
    """
    if n < 0 or s < 0:
        raise ValueError("require n >= 0 and s >= 0")
    s, b = _LD(s), _LD(b)
    prev = np.zeros(1, dtype=_LD)       # c_{-1}(a) = 0
    cur = np.ones(1, dtype=_LD)         # c_0(a) = 1
    for j in range(-1, n):
        den = _LD(j + 2) * (_LD(j) + 2 * (s + 1))
        affine = np.array([b * (2 * j + 2 * s + 3) / (2 * den), 1 / den], dtype=_LD)
        b_j = 2 * _LD(j - n) / den
        prev, cur = cur, _padded_sum(np.convolve(affine, cur), b_j * prev)
    return RealPolynomial(cur)


def _polish_real(coeffs_asc: np.ndarray, x0: float, iters: int = 6) -> float:
    """A few Newton steps in extended precision on an ascending coefficient array."""
    desc = np.asarray(coeffs_asc, dtype=_LD)[::-1]
    x = _LD(x0)
    for _ in range(iters):
        p = dp = _LD(0)
        for ck in desc:
            dp = dp * x + p
            p = p * x + ck
        if dp == 0:
            break
        step = p / dp
        x -= step
        if abs(step) <= abs(x) * _LD(1e-18):
            break
    return float(x)


def _clustered_roots(coeffs_asc: np.ndarray, merge_tol: float):
    """np.roots + merge of near-coincident roots.

    Returns (values, multiplicities, scale): each cluster is replaced by its
    mean (conjugate pairs of a defective double root collapse back onto the
    real axis) and reported with its multiplicity.
    """
    roots = np.roots(np.asarray(coeffs_asc, dtype=float)[::-1])
    if roots.size == 0:
        return np.array([], dtype=complex), np.array([], dtype=int), 1.0
    scale = max(1.0, float(np.abs(roots).max()))
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    values, counts = [], []
    for r in roots:
        if values and abs(r - values[-1] / counts[-1]) <= merge_tol * scale:
            values[-1] += r
            counts[-1] += 1
        else:
            values.append(r)
            counts.append(1)
    vals = np.array([v / k for v, k in zip(values, counts)])
    return vals, np.asarray(counts), scale


def real_roots(p: RealPolynomial, im_tol: float = IM_TOL,
               merge_tol: float = MERGE_TOL) -> np.ndarray:
    """All real roots of p, descending, repeated according to multiplicity.

    Roots come from the companion-matrix spectrum; near-coincident roots are
    merged (their count preserved) and simple real roots are Newton-polished
    in extended precision.
    """
    if p.degree < 1:
        if np.all(p.coefficients == 0):
            raise ValueError("polynomial is identically zero")
        raise ValueError("polynomial has degree 0: no roots to extract")
    vals, counts, scale = _clustered_roots(p.coefficients, merge_tol)
    out = []
    for v, k in zip(vals, counts):
        if abs(v.imag) > im_tol * scale:
            continue
        x = v.real
        if k == 1:
            x = _polish_real(p.coefficients, x)
        out.extend([x] * int(k))
    return np.sort(np.asarray(out, dtype=float))[::-1]


def grouped_roots(roots, tol: float = MERGE_TOL):
    """Collapse a descending root list into (value, multiplicity) pairs."""
    roots = np.asarray(roots, dtype=float)
    scale = max(1.0, float(np.abs(roots).max())) if roots.size else 1.0
    groups: list[list[float]] = []
    for r in roots:
        if groups and abs(r - groups[-1][0]) <= tol * scale:
            groups[-1][1] += 1
        else:
            groups.append([r, 1])
    return [(v, int(k)) for v, k in groups]


@dataclass(frozen=True)
class QuadraticRoots:
    """Both branches of the closed-form coupling roots for a one-node factor."""

    plus: complex
    minus: complex
    discriminant: float

    @property
    def is_real(self) -> bool:
        return self.discriminant >= 0


def heun_quadratic_roots(b: float, d: float) -> QuadraticRoots:
    """Closed-form roots a^(+-) = [4 - 2b^2 - bd +- sqrt(b^4 - 8b^2 - 8bd + 16)] / b^2."""
    if b == 0:
        raise ValueError("closed form undefined for b = 0")
    disc = b ** 4 - 8.0 * b ** 2 - 8.0 * b * d + 16.0
    root = np.sqrt(complex(disc))
    plus = (4.0 - 2.0 * b ** 2 - b * d + root) / b ** 2
    minus = (4.0 - 2.0 * b ** 2 - b * d - root) / b ** 2
    if disc >= 0:
        plus, minus = complex(plus.real), complex(minus.real)
    return QuadraticRoots(plus=plus, minus=minus, discriminant=disc)


def heun_cubic(b: float, d: float) -> RealPolynomial:
    """The displayed cubic in a for a two-node factor (ascending coefficients).

    Degenerates to lower degree when b = 0; trailing zeros are trimmed.
    """
    return RealPolynomial([
        15.0 * b ** 3 + 23.0 * b ** 2 * d + b * (9.0 * d ** 2 - 112.0) + d * (d ** 2 - 48.0),
        23.0 * b ** 3 + 18.0 * b ** 2 * d + 3.0 * b * (d ** 2 - 48.0) - 32.0 * d,
        b * (9.0 * b ** 2 + 3.0 * b * d - 32.0),
        b ** 3,
    ])


def heun_truncation_polynomial(n0: int, b: float, d: float) -> RealPolynomial:
    """c_{n0+1}(a) for the Heun form, with c = a + 2(n0+1) substituted.

    Clearing the rational denominators of the recurrence gives the polynomial
    recursion

        N_{j+2}(a) = [b(a + 2j + 3) + d] N_{j+1}(a)
                     + 8 (j+1)(j - n0)(a + j + 1) N_j(a),

    with N_{-1} = 0, N_0 = 1, whose roots coincide with those of c_{n0+1}.
    """
    if n0 < 0:
        raise ValueError("n0 must be >= 0")
    b, d = _LD(b), _LD(d)
    prev = np.zeros(1, dtype=_LD)
    cur = np.ones(1, dtype=_LD)
    for j in range(-1, n0):
        lin = np.array([b * (2 * j + 3) + d, b], dtype=_LD)
        quad = 8 * _LD(j + 1) * _LD(j - n0) * np.array([_LD(j + 1), _LD(1)], dtype=_LD)
        prev, cur = cur, _padded_sum(np.convolve(lin, cur), np.convolve(quad, prev))
    return RealPolynomial(cur)


def heun_truncation_general(n0: int, b: float, d: float,
                            im_tol: float = IM_TOL) -> np.ndarray:
    """All coupling roots (possibly complex) for an (n0+1)-term factor,
    sorted descending by real part; real roots are polished."""
    p = heun_truncation_polynomial(n0, b, d)
    vals, counts, scale = _clustered_roots(p.coefficients, MERGE_TOL)
    out = []
    for v, k in zip(vals, counts):
        if abs(v.imag) <= im_tol * scale:
            x = v.real
            if k == 1:
                x = _polish_real(p.coefficients, x)
            out.extend([complex(x)] * int(k))
        else:
            out.extend([complex(v)] * int(k))
    out.sort(key=lambda z: (-z.real, -z.imag))
    return np.asarray(out, dtype=complex)


@dataclass(frozen=True)
class TruncationSolution:
    """One terminating eigenpair: polynomial degree n, root index i (1-based,
    roots descending within the family), coupling root, energy, and the n+1
    polynomial coefficients."""

    n: int
    i: int
    a_root: float
    w: float
    s: float
    b: float
    coeffs: np.ndarray = field(repr=False)


def assemble_solution(n: int, s: float, b: float, a_root: float,
                      i: int = 0) -> TruncationSolution:
    """Rebuild the series at (a_root, W_s^(n)) and package the eigenpair.

    The two coefficients past the terminating degree are recomputed from
    scratch; if either exceeds 1e-12 of the largest coefficient the inputs
    are inconsistent and assembly fails.
    """
    w = truncation_energy(n, s, b)
    c = _model_series_ld(RadialModel(gamma=s, a=a_root, b=b), w, n + 2)
    cf = np.abs(c.astype(float))
    tail = max(cf[n + 1], cf[n + 2])
    if tail > 1e-12 * cf.max():
        raise ValueError(
            f"series does not terminate at degree {n}: |tail|={tail:.3e}, "
            f"max|c|={cf.max():.3e} (a={a_root!r}, s={s!r}, b={b!r})")
    return TruncationSolution(n=n, i=i, a_root=float(a_root), w=w, s=s, b=b,
                              coeffs=c[: n + 1].astype(float))


def truncation_family(n: int, s: float, b: float,
                      im_tol: float = IM_TOL) -> list[TruncationSolution]:
    """All terminating solutions of degree n at (s, b), ordered by descending
    coupling root (i = 1 is the largest root)."""
    roots = real_roots(truncation_polynomial_in_a(n, s, b), im_tol=im_tol)
    return [assemble_solution(n, s, b, r, i=k)
            for k, r in enumerate(roots, start=1)]
