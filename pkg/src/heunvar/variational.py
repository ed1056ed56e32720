"""Rayleigh-Ritz machinery on the Gaussian-weighted power basis.

Basis functions are phi_j(x) = x^(s+j) exp(-x^2/2) for j = 0..N-1 on the
half-line with measure x dx, so every matrix element reduces to the moment
integral I(m) = 0.5 * Gamma((m+1)/2).  The Hamiltonian acts as

    H phi_j = [ (gamma^2 - (s+j)^2) x^(s+j-2) + a x^(s+j-1)
                + 2 (s+j+1) x^(s+j) + b x^(s+j+1) ] exp(-x^2/2),

which splits the matrix as H = T + a*M(-1) + b*M(+1) with coupling-independent
pieces -- the key to sweeping many couplings cheaply.

Two solver routes are provided:

* ``generalized_eigensolve`` -- canonical orthogonalization of S with a
  drop tolerance, entirely in double precision.  Simple and adequate for
  spot solves and expectation values.
* ``reduced_operators`` / ``nested_eigenvalues`` -- an extended-precision
  Cholesky congruence computed once per (N, s) and cached.  Because the
  Cholesky factor of a leading principal submatrix is the leading block of
  the full factor, the reduced operators for basis size k are *bitwise*
  the leading k x k blocks of the size-N ones; variational monotonicity in
  the basis size then survives into floating point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import NumericalError
from .model import RadialModel

__all__ = [
    "gaussian_moment",
    "overlap_matrix",
    "moment_matrix",
    "kinetic_matrix",
    "hamiltonian_matrix",
    "generalized_eigensolve",
    "expectation",
    "ReducedOperators",
    "reduced_operators",
    "nested_eigenvalues",
    "HellmannFeynmanResult",
    "hellmann_feynman_check",
    "SpectralCurves",
    "spectral_curves",
    "MatchResult",
    "match_points_to_curves",
]

DROP_TOL = 1e-12


def gaussian_moment(m: float) -> float:
    """I(m) = integral_0^inf x^m exp(-x^2) dx = 0.5 * Gamma((m+1)/2), m > -1."""
    if m <= -1:
        raise ValueError(f"moment diverges for m <= -1 (got m={m!r})")
    return 0.5 * math.gamma((m + 1.0) / 2.0)


@lru_cache(maxsize=None)
def _moment_mp(m: float, dps: int):
    with mp.workdps(dps):
        return 0.5 * mp.gamma(mp.mpf((m + 1.0)) / 2)


def overlap_matrix(n: int, s: float) -> np.ndarray:
    """S_ij = <phi_i|phi_j> = I(2s + i + j + 1)."""
    idx = np.arange(n)
    return np.array([[gaussian_moment(2 * s + i + j + 1) for j in idx] for i in idx])


def moment_matrix(n: int, s: float, power: int) -> np.ndarray:
    """<phi_i| x^power |phi_j> = I(2s + i + j + 1 + power)."""
    idx = np.arange(n)
    return np.array(
        [[gaussian_moment(2 * s + i + j + 1 + power) for j in idx] for i in idx])


def kinetic_matrix(n: int, s: float) -> np.ndarray:
    """Coupling-independent part of H (radial Laplacian, centrifugal and
    quadratic terms), symmetrized by averaging."""
    t = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            cent = -j * (j + 2.0 * s)          # gamma^2 - (s+j)^2 with s=|gamma|
            val = 2.0 * (s + j + 1.0) * gaussian_moment(2 * s + i + j + 1)
            if cent != 0.0:
                val += cent * gaussian_moment(2 * s + i + j - 1)
            t[i, j] = val
    return 0.5 * (t + t.T)


def hamiltonian_matrix(model: RadialModel, n: int) -> np.ndarray:
    """H = T + a*M(-1) + b*M(+1) for the given couplings."""
    return (kinetic_matrix(n, model.s)
            + model.a * moment_matrix(n, model.s, -1)
            + model.b * moment_matrix(n, model.s, +1))


def generalized_eigensolve(h: np.ndarray, s: np.ndarray,
                           drop_tol: float = DROP_TOL):
    """Solve H c = W S c by canonical orthogonalization.

    The basis is first rescaled to unit overlap diagonal (the moment matrices
    span many orders of magnitude, which would otherwise make the drop
    threshold meaningless).  Eigendirections of the scaled S with eigenvalue
    below drop_tol times the largest are discarded; the rest are normalized
    to an orthonormal set X, and the ordinary symmetric problem X^T H X is
    diagonalized.  Returns (w, c) with ascending eigenvalues and coefficient
    columns in the original basis, S-orthonormal.

    Raises NumericalError if every direction is dropped.
    """
    diag = np.diag(s)
    if np.any(diag <= 0):
        raise NumericalError("overlap matrix has a non-positive diagonal entry")
    d = 1.0 / np.sqrt(diag)
    lam, u = np.linalg.eigh(s * d[:, None] * d[None, :])
    keep = lam > drop_tol * lam[-1]
    if not np.any(keep):
        raise NumericalError(
            f"overlap matrix collapsed: no eigenvalue above {drop_tol!r} "
            f"of the largest ({lam[-1]!r})")
    x = d[:, None] * (u[:, keep] / np.sqrt(lam[keep]))
    w, v = np.linalg.eigh(x.T @ h @ x)
    return w, x @ v


def expectation(c: np.ndarray, m: np.ndarray, s: np.ndarray) -> float:
    """<c|M|c> / <c|S|c> for a coefficient vector in the original basis."""
    c = np.asarray(c, dtype=float)
    return float(c @ m @ c) / float(c @ s @ c)


# ---------------------------------------------------------------------------
# Cached extended-precision reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedOperators:
    """Operators congruence-transformed to an orthonormal basis.

    ``t``, ``m_minus``, ``m_plus`` are double-precision copies; the ``_mp``
    fields hold the extended-precision originals for refined eigenvalue
    extraction.  Treat all fields as read-only: instances are cached and
    shared.
    """

    size: int
    s: float
    t: np.ndarray = field(repr=False)
    m_minus: np.ndarray = field(repr=False)
    m_plus: np.ndarray = field(repr=False)
    t_mp: object = field(repr=False)
    m_minus_mp: object = field(repr=False)
    m_plus_mp: object = field(repr=False)
    min_pivot_sq: float = 0.0


def _mp_moment_row(n: int, s: float, power: int, dps: int) -> mp.matrix:
    out = mp.matrix(n)
    for i in range(n):
        for j in range(n):
            out[i, j] = _moment_mp(2 * s + i + j + 1 + power, dps)
    return out


@lru_cache(maxsize=16)
def reduced_operators(n: int, s: float, dps: int = 50) -> ReducedOperators:
    """Build and cache L^{-1} M L^{-T} for M in {T, M(-1), M(+1)}, with L the
    extended-precision Cholesky factor of the overlap matrix."""
    with mp.workdps(dps):
        smat = _mp_moment_row(n, s, 0, dps)
        mminus = _mp_moment_row(n, s, -1, dps)
        mplus = _mp_moment_row(n, s, +1, dps)
        tmat = mp.matrix(n)
        for i in range(n):
            for j in range(n):
                val = 2 * (mp.mpf(s) + j + 1) * _moment_mp(2 * s + i + j + 1, dps)
                cent = -j * (j + 2.0 * s)
                if cent != 0.0:
                    val += mp.mpf(cent) * _moment_mp(2 * s + i + j - 1, dps)
                tmat[i, j] = val
        for i in range(n):
            for j in range(i):
                avg = (tmat[i, j] + tmat[j, i]) / 2
                tmat[i, j] = tmat[j, i] = avg
        try:
            lfac = mp.cholesky(smat)
        except Exception as exc:  # pragma: no cover - S is PD by construction
            raise NumericalError(f"overlap matrix not positive definite: {exc}")
        min_pivot_sq = float(min(lfac[i, i] for i in range(n))) ** 2
        linv = mp.inverse(lfac)

        def reduce(mat):
            red = linv * mat * linv.T
            for i in range(n):
                for j in range(i):
                    avg = (red[i, j] + red[j, i]) / 2
                    red[i, j] = red[j, i] = avg
            return red

        tred, mmred, mpred = reduce(tmat), reduce(mminus), reduce(mplus)

        def to_float(mat):
            return np.array([[float(mat[i, j]) for j in range(n)]
                             for i in range(n)])

        return ReducedOperators(
            size=n, s=s,
            t=to_float(tred), m_minus=to_float(mmred), m_plus=to_float(mpred),
            t_mp=tred, m_minus_mp=mmred, m_plus_mp=mpred,
            min_pivot_sq=min_pivot_sq)


def _slice_mp(mat, k: int) -> mp.matrix:
    out = mp.matrix(k)
    for i in range(k):
        for j in range(k):
            out[i, j] = mat[i, j]
    return out


def nested_eigenvalues(model: RadialModel, sizes, k: int,
                       refine: bool = False, dps: int = 30,
                       ops: ReducedOperators | None = None) -> np.ndarray:
    """Lowest k eigenvalues for each basis size in ``sizes`` (ascending per row).

    All sizes are served from one cached reduction (leading blocks), so the
    trial spaces are exactly nested and each eigenvalue is non-increasing in
    the basis size.  ``refine=True`` diagonalizes the extended-precision
    blocks instead of the double-precision copies, making that monotonicity
    hold exactly even after rounding the results to float.
    """
    sizes = [int(m) for m in sizes]
    if min(sizes) < k:
        raise ValueError(f"every basis size must be >= k={k}")
    ops = ops or reduced_operators(max(sizes), model.s)
    out = np.empty((len(sizes), k))
    if not refine:
        a_full = ops.t + model.a * ops.m_minus + model.b * ops.m_plus
        for row, m in enumerate(sizes):
            out[row] = np.linalg.eigvalsh(a_full[:m, :m])[:k]
        return out
    with mp.workdps(dps):
        for row, m in enumerate(sizes):
            amat = (_slice_mp(ops.t_mp, m)
                    + mp.mpf(model.a) * _slice_mp(ops.m_minus_mp, m)
                    + mp.mpf(model.b) * _slice_mp(ops.m_plus_mp, m))
            vals = sorted(float(v) for v in mp.eigsy(amat, eigvals_only=True))
            out[row] = vals[:k]
    return out


# ---------------------------------------------------------------------------
# Hellmann-Feynman cross-check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HellmannFeynmanResult:
    """Finite-difference energy slopes versus expectation values for one state."""

    state: int
    delta: float
    dw_da_fd: float
    dw_da_expect: float
    dw_db_fd: float
    dw_db_expect: float
    crossing_suspected: bool

    @property
    def error_a(self) -> float:
        return abs(self.dw_da_fd - self.dw_da_expect)

    @property
    def error_b(self) -> float:
        return abs(self.dw_db_fd - self.dw_db_expect)


def hellmann_feynman_check(model: RadialModel, basis_size: int,
                           state: int = 0, delta: float = 1e-2,
                           drop_tol: float = DROP_TOL) -> HellmannFeynmanResult:
    """Compare dW/da and dW/db for one bound state against <1/x> and <x>.

    Central differences of the eigenvalue are matched against expectation
    values taken in the unperturbed eigenvector.  If eigenvectors at the
    displaced couplings have small overlap with the central one, the state
    ordering may have changed across the stencil and the result is flagged.
    """
    s_mat = overlap_matrix(basis_size, model.s)
    m_minus = moment_matrix(basis_size, model.s, -1)
    m_plus = moment_matrix(basis_size, model.s, +1)
    t_mat = kinetic_matrix(basis_size, model.s)

    def solve(a, b):
        return generalized_eigensolve(t_mat + a * m_minus + b * m_plus, s_mat,
                                      drop_tol=drop_tol)

    w0, c0 = solve(model.a, model.b)
    c_ref = c0[:, state]
    crossing = False

    def eig_at(a, b):
        nonlocal crossing
        w, c = solve(a, b)
        overlap = abs(c_ref @ s_mat @ c[:, state])
        norm = math.sqrt((c_ref @ s_mat @ c_ref) * (c[:, state] @ s_mat @ c[:, state]))
        if overlap < 0.9 * norm:
            crossing = True
        return w[state]

    dw_da_fd = (eig_at(model.a + delta, model.b)
                - eig_at(model.a - delta, model.b)) / (2 * delta)
    dw_db_fd = (eig_at(model.a, model.b + delta)
                - eig_at(model.a, model.b - delta)) / (2 * delta)
    return HellmannFeynmanResult(
        state=state, delta=delta,
        dw_da_fd=float(dw_da_fd),
        dw_da_expect=expectation(c_ref, m_minus, s_mat),
        dw_db_fd=float(dw_db_fd),
        dw_db_expect=expectation(c_ref, m_plus, s_mat),
        crossing_suspected=crossing)


# ---------------------------------------------------------------------------
# Spectral curves and point matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralCurves:
    """W_nu(a) on a coupling grid at fixed (s, b).

    ``values[nu, i]`` is the nu-th eigenvalue at ``a_grid[i]``; rows are
    strictly increasing in a (checked at construction time by the factory).
    """

    s: float
    b: float
    basis_size: int
    a_grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def nu_max(self) -> int:
        return self.values.shape[0] - 1

    def interp(self, nu: int, a: float) -> float:
        """Linear interpolation of curve nu at coupling a (must lie in-grid)."""
        if not (self.a_grid[0] <= a <= self.a_grid[-1]):
            raise ValueError(f"a={a!r} outside grid "
                             f"[{self.a_grid[0]!r}, {self.a_grid[-1]!r}]")
        return float(np.interp(a, self.a_grid, self.values[nu]))


def spectral_curves(s: float, b: float, a_grid, nu_max: int,
                    basis_size: int, drop_tol: float = DROP_TOL,
                    check_monotone: bool = True) -> SpectralCurves:
    """Sweep the coupling grid and collect the lowest nu_max+1 eigenvalues.

    The coupling-independent reduced operators are computed once (cached), so
    each grid point costs a single dense symmetric eigensolve.  The reduction
    keeps the full basis; ``drop_tol`` is accepted for interface parity with
    ``generalized_eigensolve`` but no direction is ever dropped here.

    Raises NumericalError if the requested number of curves exceeds the basis
    or if any curve fails to increase strictly along the grid.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if a_grid.ndim != 1 or a_grid.size < 1:
        raise ValueError("a_grid must be a non-empty 1-d grid")
    if nu_max + 1 > basis_size:
        raise NumericalError(
            f"basis of size {basis_size} cannot resolve nu_max={nu_max}")
    ops = reduced_operators(basis_size, s)
    base = ops.t + b * ops.m_plus
    values = np.empty((nu_max + 1, a_grid.size))
    for idx, a in enumerate(a_grid):
        try:
            values[:, idx] = np.linalg.eigvalsh(base + a * ops.m_minus)[: nu_max + 1]
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"eigensolve failed at grid point a={a!r} (index {idx}): {exc}")
    if check_monotone:
        diffs = np.diff(values, axis=1)
        bad = np.argwhere(diffs <= 0)
        if bad.size:
            nu, i = bad[0]
            raise NumericalError(
                f"curve nu={nu} not strictly increasing between "
                f"a={a_grid[i]!r} and a={a_grid[i + 1]!r}")
    return SpectralCurves(s=s, b=b, basis_size=basis_size,
                          a_grid=a_grid, values=values)


@dataclass(frozen=True)
class MatchResult:
    """Verdict for one terminating point against its predicted curve."""

    n: int
    i: int
    a_root: float
    w: float
    nu_expected: int
    nu_assigned: int
    residual_rel: float
    ok: bool


def match_points_to_curves(solutions, curves: SpectralCurves,
                           match_tol: float = 1e-5) -> list[MatchResult]:
    """Place each terminating eigenpair on the spectral-curve family.

    The claimed rule is nu = i - 1: the i-th largest coupling root of the
    degree-n family lies on curve i-1.  Each point is interpolated into every
    curve; ``nu_assigned`` is the closest curve, ``residual_rel`` the relative
    mismatch against the *expected* curve.  A violation of the index map is
    never silently reindexed: it emits a ``RuntimeWarning`` and fails the
    match.  Points whose coupling falls outside the grid are skipped.
    """
    out = []
    for sol in solutions:
        if not (curves.a_grid[0] <= sol.a_root <= curves.a_grid[-1]):
            continue
        interp = np.array([curves.interp(nu, sol.a_root)
                           for nu in range(curves.nu_max + 1)])
        nu_expected = sol.i - 1
        nu_assigned = int(np.argmin(np.abs(interp - sol.w)))
        if nu_expected > curves.nu_max:
            continue
        residual = float(abs(interp[nu_expected] - sol.w) / max(1.0, abs(sol.w)))
        if nu_assigned != nu_expected:
            warnings.warn(
                f"index map violated: point (n={sol.n}, i={sol.i}, "
                f"a={sol.a_root:.6g}, W={sol.w:.6g}) is closest to curve "
                f"nu={nu_assigned}, not nu={nu_expected}",
                RuntimeWarning, stacklevel=2)
        out.append(MatchResult(
            n=sol.n, i=sol.i, a_root=sol.a_root, w=sol.w,
            nu_expected=nu_expected, nu_assigned=nu_assigned,
            residual_rel=residual,
            ok=bool(residual <= match_tol and nu_assigned == nu_expected)))
    return out
