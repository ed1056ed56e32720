"""The five user-facing workflows, shared by the CLI and the HTTP service.

Each ``run_*`` function takes a validated :class:`RunConfig` and returns a
plain result object (:class:`Table`, :class:`FigureDataset` or
:class:`VerifyReport`).  Rendering to tab-separated text is done here so that
both front ends emit byte-identical artifacts: floats are printed with 17
significant digits, row order is fixed, and the effective configuration is
echoed into every output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .errors import NumericalError, UsageError
from .model import RadialModel, RadialCoefficients, heun_from_radial
from .series import (SeriesAnsatz, _model_series_ld, model_recurrence,
                     ode_residual, truncated_b)
from .truncation import (IM_TOL, heun_cubic, heun_quadratic_roots,
                         heun_truncation_general, real_roots,
                         truncation_energy, truncation_family)
from .variational import (generalized_eigensolve, hamiltonian_matrix,
                          hellmann_feynman_check, match_points_to_curves,
                          nested_eigenvalues, overlap_matrix, spectral_curves)

__all__ = [
    "RunConfig",
    "Table",
    "FigureDataset",
    "CheckResult",
    "VerifyReport",
    "render_table",
    "run_truncate",
    "run_heun_roots",
    "run_curves",
    "run_figure",
    "run_verify",
]

COMMANDS = ("truncate", "heun-roots", "curves", "figure", "verify")


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration of one workflow invocation.

    ``s`` and ``gamma`` are alternatives (s = |gamma| when only gamma is
    given); all other fields carry their documented defaults so the echoed
    configuration never hides one.
    """

    command: str
    s: float | None = None
    gamma: float | None = None
    b: float = 1.0
    d: float = 0.0
    n0: int = 1
    n_min: int = 0
    n_max: int = 6
    a_min: float = -5.0
    a_max: float = 5.0
    a_step: float = 0.05
    nu_max: int = 6
    basis_size: int = 25
    drop_tol: float = 1e-12
    match_tol: float = 1e-5
    im_tol: float = IM_TOL
    fd_delta: float = 1e-2
    out: str | None = None
    fmt: str = "table"
    self_test: bool = False

    @property
    def effective_s(self) -> float:
        if self.s is not None:
            return float(self.s)
        if self.gamma is not None:
            return abs(float(self.gamma))
        return 0.0

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.s is not None and self.s < 0:
            raise UsageError("s must be >= 0 (use --gamma for signed input)")
        if self.a_step <= 0:
            raise UsageError("a-step must be > 0")
        if self.a_max < self.a_min:
            raise UsageError("a-max must be >= a-min")
        if not (0 <= self.n_min <= self.n_max):
            raise UsageError("require 0 <= n-min <= n-max")
        if self.n0 < 0:
            raise UsageError("n0 must be >= 0")
        if self.nu_max < 0:
            raise UsageError("nu-max must be >= 0")
        if self.basis_size < 1:
            raise UsageError("basis-size must be >= 1")
        for name in ("drop_tol", "match_tol", "im_tol", "fd_delta"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be > 0")
        if self.fmt not in ("table", "object"):
            raise UsageError("format must be 'table' or 'object'")
        return self

    def a_grid(self) -> np.ndarray:
        n = int(round((self.a_max - self.a_min) / self.a_step)) + 1
        return np.linspace(self.a_min, self.a_max, n)

    def echo(self) -> dict:
        """Full effective configuration, fixed key order."""
        return {
            "command": self.command,
            "s": self.effective_s,
            "b": self.b,
            "d": self.d,
            "n0": self.n0,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "a_min": self.a_min,
            "a_max": self.a_max,
            "a_step": self.a_step,
            "nu_max": self.nu_max,
            "basis_size": self.basis_size,
            "drop_tol": self.drop_tol,
            "match_tol": self.match_tol,
            "im_tol": self.im_tol,
            "fd_delta": self.fd_delta,
            "format": self.fmt,
            "self_test": self.self_test,
        }


def jsonable(value):
    """Recursively convert to plain JSON-safe Python (non-finite -> null)."""
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


@dataclass(frozen=True)
class Table:
    """Column-labelled rows plus the configuration they were produced under."""

    columns: tuple
    rows: list = field(repr=False)
    config: dict = field(default_factory=dict, repr=False)

    def to_object(self) -> dict:
        return {"config": jsonable(self.config),
                "columns": list(self.columns),
                "rows": jsonable(self.rows)}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render_table(table: Table) -> str:
    """Tab-separated text: '# key = value' config echo, header, data rows.

    Floats carry 17 significant digits so a re-run reproduces the bytes.
    """
    lines = [f"# {k} = {_fmt(v)}" for k, v in table.config.items()]
    lines.append("\t".join(table.columns))
    for row in table.rows:
        lines.append("\t".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# truncate
# ---------------------------------------------------------------------------

def run_truncate(cfg: RunConfig) -> Table:
    """Terminating eigenpairs for every n in [n_min, n_max]: coupling roots in
    descending order with the shared energy and polynomial coefficients."""
    s = cfg.effective_s
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for sol in truncation_family(n, s, cfg.b, im_tol=cfg.im_tol):
            rows.append([sol.n, sol.i, sol.a_root, sol.w,
                         ",".join(format(c, ".17g") for c in sol.coeffs)])
    return Table(columns=("n", "i", "a_root", "w", "coefficients"),
                 rows=rows, config=cfg.echo())


# ---------------------------------------------------------------------------
# heun-roots
# ---------------------------------------------------------------------------

def _closed_form_roots(n0: int, b: float, d: float) -> list[complex] | None:
    """Closed-form root list for n0 in {1, 2}, ordered like the general route."""
    if n0 == 1:
        q = heun_quadratic_roots(b, d)
        roots = [q.plus, q.minus]
    elif n0 == 2:
        poly = heun_cubic(b, d)
        roots = [complex(r) for r in np.roots(poly.as_float()[::-1])]
        real = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(
            1.0, max(abs(x) for x in roots))]
        if len(real) == len(roots):
            roots = [complex(r) for r in real_roots(poly)]
    else:
        return None
    return sorted(roots, key=lambda z: (-z.real, -z.imag))


def run_heun_roots(cfg: RunConfig) -> Table:
    """General-route truncation roots with a closed-form check column.

    For n0 = 1 the quadratic closed form requires b != 0; for n0 = 2 the
    displayed cubic is used.  A row whose routes disagree by more than 1e-8
    (relative to max(1, |root|)) is marked FAILED; rows without a closed form
    are marked NA.
    """
    if cfg.n0 == 1 and cfg.b == 0:
        raise NumericalError(
            "closed-form quadratic for n0=1 is undefined at b=0 "
            "(its coefficients divide by b^2)")
    general = heun_truncation_general(cfg.n0, cfg.b, cfg.d, im_tol=cfg.im_tol)
    closed = _closed_form_roots(cfg.n0, cfg.b, cfg.d)
    rows = []
    for k, root in enumerate(general, start=1):
        if closed is None:
            rows.append([k, root.real, root.imag,
                         float("nan"), float("nan"), float("nan"), "NA"])
            continue
        ref = closed[k - 1]
        diff = abs(root - ref) / max(1.0, abs(root))
        rows.append([k, root.real, root.imag, ref.real, ref.imag, diff,
                     "OK" if diff <= 1e-8 else "FAILED"])
    return Table(
        columns=("i", "general_re", "general_im", "closed_re", "closed_im",
                 "rel_diff", "status"),
        rows=rows, config=cfg.echo())


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

def run_curves(cfg: RunConfig) -> Table:
    """Variational spectral curves W_nu(a), one row per (nu, a), nu-major."""
    curves = spectral_curves(cfg.effective_s, cfg.b, cfg.a_grid(), cfg.nu_max,
                             cfg.basis_size, drop_tol=cfg.drop_tol)
    rows = [[nu, a, curves.values[nu, idx]]
            for nu in range(cfg.nu_max + 1)
            for idx, a in enumerate(curves.a_grid)]
    return Table(columns=("nu", "a", "w"), rows=rows, config=cfg.echo())


# ---------------------------------------------------------------------------
# figure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FigureDataset:
    """Everything needed to reproduce and audit the cross-verification plot:
    curve samples, terminating points with their curve assignment, and a
    metadata block (configuration, versions, timings, audit results)."""

    curves: Table
    points: Table
    metadata: dict


def run_figure(cfg: RunConfig) -> FigureDataset:
    """Spectral curves plus every in-window terminating point, cross-matched.

    The audit block records the worst relative mismatch (overall and for
    n <= 4), whether every point landed on its predicted curve nu = i - 1,
    and the minimum coupling gap between distinct points -- the emitted-data
    form of the claim that a vertical line meets at most one point.
    """
    s = cfg.effective_s
    t0 = time.perf_counter()
    curves = spectral_curves(s, cfg.b, cfg.a_grid(), cfg.nu_max,
                             cfg.basis_size, drop_tol=cfg.drop_tol)
    t_curves = time.perf_counter() - t0

    t0 = time.perf_counter()
    solutions = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        solutions.extend(truncation_family(n, s, cfg.b, im_tol=cfg.im_tol))
    matches = match_points_to_curves(solutions, curves, match_tol=cfg.match_tol)
    t_points = time.perf_counter() - t0

    curve_rows = [[nu, a, curves.values[nu, idx]]
                  for nu in range(cfg.nu_max + 1)
                  for idx, a in enumerate(curves.a_grid)]
    point_rows = [[m.n, m.i, m.a_root, m.w, m.nu_expected, m.nu_assigned,
                   m.residual_rel, "OK" if m.ok else "FAILED"]
                  for m in matches]

    roots = np.array([m.a_root for m in matches])
    if roots.size > 1:
        gaps = np.diff(np.sort(roots))
        min_gap = float(gaps.min())
    else:
        min_gap = float("inf")
    bin_width = 1e-8 * max(1.0, float(np.abs(roots).max()) if roots.size else 1.0)
    small = [m for m in matches if m.n <= 4]
    audits = {
        "points_total": len(matches),
        "points_n_le_4": len(small),
        "worst_residual_rel_n_le_4": max((m.residual_rel for m in small),
                                         default=0.0),
        "worst_residual_rel_all": max((m.residual_rel for m in matches),
                                      default=0.0),
        "all_n_le_4_ok": all(m.ok for m in small),
        "all_assigned_to_expected": all(
            m.nu_assigned == m.nu_expected for m in matches),
        "vertical_line_bin_width": bin_width,
        "vertical_line_min_gap": min_gap,
        "vertical_line_ok": bool(min_gap > bin_width),
    }
    metadata = {
        "config": cfg.echo(),
        "versions": {
            "package": __version__,
            "numpy": np.__version__,
        },
        "timings_seconds": {
            "curves": t_curves,
            "points_and_matching": t_points,
        },
        "audits": audits,
    }
    return FigureDataset(
        curves=Table(("nu", "a", "w"), curve_rows, cfg.echo()),
        points=Table(("n", "i", "a_root", "w", "nu_expected", "nu_assigned",
                      "residual_rel", "status"), point_rows, cfg.echo()),
        metadata=metadata)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    allowed: str
    passed: bool
    detail: str = ""

    def __post_init__(self):
        # keep downstream serialization free of numpy scalar types
        object.__setattr__(self, "measured", float(self.measured))
        object.__setattr__(self, "passed", bool(self.passed))


@dataclass(frozen=True)
class VerifyReport:
    checks: list
    config: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_table(self) -> Table:
        rows = [[c.name, c.measured, c.allowed,
                 "PASS" if c.passed else "FAIL", c.detail or "-"]
                for c in self.checks]
        return Table(("check", "measured", "allowed", "status", "detail"),
                     rows, self.config)


def _check_series_closure(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    worst = 0.0
    for n in range(0, 7):
        for sol in truncation_family(n, s, cfg.b):
            mdl = RadialModel(gamma=s, a=sol.a_root, b=cfg.b)
            c = np.abs(_model_series_ld(mdl, sol.w, n + 2).astype(float))
            worst = max(worst, max(c[n + 1], c[n + 2]) / c.max())
    return CheckResult("series-closure", worst, "<= 1e-12", worst <= 1e-12,
                       "rebuilt tail coefficients, n <= 6")


def _check_simplified_b(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    worst = 0.0
    for n in (0, 2, 5):
        w = truncation_energy(n, s, cfg.b)
        mdl = RadialModel(gamma=s, a=0.7, b=cfg.b)
        for j in range(-1, 21):
            full = model_recurrence(mdl, w, j).b_j
            worst = max(worst, abs(full - truncated_b(n, s, j)))
    return CheckResult("simplified-b-identity", worst, "<= 1e-14",
                       worst <= 1e-14, "recurrence B at terminating energy")


def _check_closed_forms(cfg: RunConfig) -> CheckResult:
    worst = 0.0
    for b, d in ((1.0, 0.0), (2.0, 0.5), (1.0, 1.0), (0.5, 2.0)):
        gen = heun_truncation_general(1, b, d)
        q = heun_quadratic_roots(b, d)
        closed = sorted([q.plus, q.minus], key=lambda z: (-z.real, -z.imag))
        for g, c in zip(gen, closed):
            worst = max(worst, abs(g - c) / max(1.0, abs(g)))
        gen3 = heun_truncation_general(2, b, d)
        closed3 = _closed_form_roots(2, b, d)
        for g, c in zip(gen3, closed3):
            worst = max(worst, abs(g - c) / max(1.0, abs(g)))
    return CheckResult("heun-closed-forms", worst, "<= 1e-8", worst <= 1e-8,
                       "quadratic and cubic vs general route")


def _check_oscillator(cfg: RunConfig) -> CheckResult:
    mdl = RadialModel(gamma=0.0, a=0.0, b=0.0)
    w, _ = generalized_eigensolve(hamiltonian_matrix(mdl, 20),
                                  overlap_matrix(20, 0.0),
                                  drop_tol=cfg.drop_tol)
    worst = max(abs(w[k] - (4.0 * k + 2.0)) for k in range(4))
    return CheckResult("oscillator-limit", worst, "<= 1e-8", worst <= 1e-8,
                       "N=20 lowest four vs 2,6,10,14")


def _check_upper_bounds(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    worst = -math.inf
    for a in (-2.0, 0.0, 2.0):
        vals = nested_eigenvalues(RadialModel(gamma=s, a=a, b=cfg.b),
                                  (5, 10, 15, 20, 25), 4, refine=True)
        worst = max(worst, float(np.diff(vals, axis=0).max()))
    return CheckResult("upper-bound-monotonicity", worst, "<= 0",
                       worst <= 0.0, "W0..W3 vs basis size 5..25, refined")


def _check_hellmann_feynman(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    worst = 0.0
    positive = True
    for a in (-2.0, 0.0, 2.0):
        for state in range(3):
            hf = hellmann_feynman_check(RadialModel(gamma=s, a=a, b=cfg.b),
                                        cfg.basis_size, state=state,
                                        delta=cfg.fd_delta,
                                        drop_tol=cfg.drop_tol)
            worst = max(worst,
                        hf.error_a / max(1.0, abs(hf.dw_da_expect)),
                        hf.error_b / max(1.0, abs(hf.dw_db_expect)))
            positive = positive and hf.dw_da_fd > 0 and hf.dw_db_fd > 0
    ok = worst <= 1e-4 and positive
    return CheckResult("hellmann-feynman", worst, "<= 1e-4 and slopes > 0", ok,
                       f"delta={cfg.fd_delta!r}, slopes positive: {positive}")


def _check_fd_order(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    mdl = RadialModel(gamma=s, a=0.0, b=cfg.b)
    devs = []
    for delta in (cfg.fd_delta, cfg.fd_delta / 2.0):
        hf = hellmann_feynman_check(mdl, cfg.basis_size, state=0, delta=delta,
                                    drop_tol=cfg.drop_tol)
        devs.append(hf.error_a)
    ratio = devs[0] / devs[1] if devs[1] else math.inf
    return CheckResult("fd-order-2", ratio, "in [3, 5]", 3.0 <= ratio <= 5.0,
                       f"deviation {devs[0]:.3e} -> {devs[1]:.3e} as delta halves")


def _check_curve_membership(cfg: RunConfig) -> CheckResult:
    s = cfg.effective_s
    curves = spectral_curves(s, cfg.b, cfg.a_grid(), cfg.nu_max,
                             cfg.basis_size, drop_tol=cfg.drop_tol)
    sols = []
    for n in range(0, 5):
        sols.extend(truncation_family(n, s, cfg.b, im_tol=cfg.im_tol))
    matches = match_points_to_curves(sols, curves, match_tol=cfg.match_tol)
    worst = max((m.residual_rel for m in matches), default=0.0)
    assigned = all(m.nu_assigned == m.nu_expected for m in matches)
    ok = worst <= cfg.match_tol and assigned and bool(matches)
    return CheckResult("curve-membership", worst,
                       f"<= {cfg.match_tol!r}", ok,
                       f"{len(matches)} points (n <= 4), assignment "
                       f"nu = i-1 everywhere: {assigned}")


def _check_vertical_line(cfg: RunConfig) -> CheckResult:
    dataset = run_figure(replace(cfg, command="figure"))
    audits = dataset.metadata["audits"]
    gap = audits["vertical_line_min_gap"]
    width = audits["vertical_line_bin_width"]
    return CheckResult("vertical-line", gap, f"> {width!r}",
                       bool(audits["vertical_line_ok"]),
                       "min coupling gap between emitted points")


def _check_round_trip(cfg: RunConfig) -> CheckResult:
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(50):
        v_m2 = float(rng.uniform(0.1, 30.0))
        v_m1 = float(rng.uniform(-5.0, 5.0))
        v_p1 = float(rng.uniform(-5.0, 5.0))
        w = float(rng.uniform(-5.0, 20.0))
        hp = heun_from_radial(RadialCoefficients(v_m2, v_m1, v_p1, w))
        back = RadialCoefficients(v_m2=(hp.a / 2.0) ** 2, v_m1=-hp.d / 2.0,
                                  v_p1=hp.b, w=hp.c - hp.b ** 2 / 4.0)
        worst = max(worst, abs(back.v_m2 - v_m2), abs(back.v_m1 - v_m1),
                    abs(back.v_p1 - v_p1), abs(back.w - w))
    return CheckResult("round-trip", worst, "<= 1e-12", worst <= 1e-12,
                       "radial -> Heun -> radial, 50 seeded draws")


def _residual_worst(cfg: RunConfig, w_shift: float = 0.0) -> float:
    s = cfg.effective_s
    worst = 0.0
    for n in range(0, 5):
        for sol in truncation_family(n, s, cfg.b, im_tol=cfg.im_tol):
            mdl = RadialModel(gamma=s, a=sol.a_root, b=cfg.b)
            u = SeriesAnsatz(mdl, sol.coeffs)
            for x in (0.1, 0.5, 1.0, 2.0):
                worst = max(worst, abs(ode_residual(mdl, sol.w + w_shift, u, x)))
    return worst


def _check_residual(cfg: RunConfig) -> CheckResult:
    worst = _residual_worst(cfg)
    return CheckResult("ode-residual", worst, "<= 1e-10", worst <= 1e-10,
                       "terminating solutions, x in {0.1, 0.5, 1, 2}")


def _check_corrupted_w(cfg: RunConfig) -> CheckResult:
    worst = _residual_worst(cfg, w_shift=0.1)
    return CheckResult("self-test-corrupted-w", worst, "> 1e-10",
                       worst > 1e-10,
                       "W shifted by +0.1 must break the residual check")


def run_verify(cfg: RunConfig) -> VerifyReport:
    """Run the cross-check battery; every check reports measured vs allowed."""
    checks = [
        _check_series_closure(cfg),
        _check_simplified_b(cfg),
        _check_closed_forms(cfg),
        _check_oscillator(cfg),
        _check_upper_bounds(cfg),
        _check_hellmann_feynman(cfg),
        _check_fd_order(cfg),
        _check_curve_membership(cfg),
        _check_vertical_line(cfg),
        _check_round_trip(cfg),
        _check_residual(cfg),
    ]
    if cfg.self_test:
        checks.append(_check_corrupted_w(cfg))
    return VerifyReport(checks=checks, config=cfg.echo())
