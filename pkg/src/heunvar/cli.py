"""Command-line front end.

Five subcommands drive the shared workflows in-process:

  truncate    terminating eigenpairs (roots, energies, coefficients)
  heun-roots  truncation roots of the Heun parameterization, with
              closed-form check columns for n0 in {1, 2}
  curves      variational spectral curves W_nu(a) on a coupling grid
  figure      curves + matched terminating points as auditable data files
  verify      the cross-check battery (measured vs allowed per check)

Exit status: 0 success, 2 usage error, 3 numerical/domain failure,
4 verification failure.  Output goes to --out (a path, or a path prefix for
figure) or stdout; --format selects a tab-separated table or a JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import NumericalError, UsageError
from .workflows import (RunConfig, jsonable, render_table, run_curves,
                        run_figure, run_heun_roots, run_truncate, run_verify)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--s", type=float, default=None,
                       help="indicial exponent s >= 0 (default 0)")
    group.add_argument("--gamma", type=float, default=None,
                       help="signed centrifugal parameter; s = |gamma|")
    p.add_argument("--b", type=float, default=1.0,
                   help="linear-potential coupling (default 1)")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a-min", type=float, default=-5.0)
    p.add_argument("--a-max", type=float, default=5.0)
    p.add_argument("--a-step", type=float, default=0.05)
    p.add_argument("--nu-max", type=int, default=6,
                   help="highest curve index (default 6)")
    p.add_argument("--basis-size", type=int, default=25,
                   help="variational basis size N (default 25)")
    p.add_argument("--drop-tol", type=float, default=1e-12,
                   help="overlap eigenvalue drop threshold (default 1e-12)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=str, default=None,
                   help="output path (figure: path prefix; default stdout)")
    p.add_argument("--format", dest="fmt", choices=("table", "object"),
                   default="table", help="table (TSV) or object (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunvar",
        description="Terminating-series eigenpairs cross-checked against "
                    "variational spectral curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truncate", help="terminating eigenpair tables")
    _add_model_flags(p)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=6)
    _add_output_flags(p)

    p = sub.add_parser("heun-roots",
                       help="truncation roots of the Heun parameterization")
    p.add_argument("--n0", type=int, default=1,
                   help="polynomial degree of the terminating factor")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--d", type=float, default=0.0)
    _add_output_flags(p)

    p = sub.add_parser("curves", help="variational spectral curves")
    _add_model_flags(p)
    _add_grid_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("figure",
                       help="emit curve/point/metadata files for the "
                            "cross-verification figure")
    _add_model_flags(p)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=6)
    _add_grid_flags(p)
    p.add_argument("--match-tol", type=float, default=1e-5,
                   help="relative curve-membership tolerance (default 1e-5)")
    p.add_argument("--out", type=str, default="figure",
                   help="output path prefix (default 'figure')")

    p = sub.add_parser("verify", help="run the cross-check battery")
    _add_model_flags(p)
    _add_grid_flags(p)
    p.add_argument("--match-tol", type=float, default=1e-5)
    p.add_argument("--fd-delta", type=float, default=1e-2,
                   help="finite-difference step for the Hellmann-Feynman "
                        "checks (default 1e-2)")
    p.add_argument("--self-test", action="store_true",
                   help="also corrupt W deliberately and require the "
                        "residual check to catch it")
    _add_output_flags(p)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {"command": args.command.replace("_", "-")}
    for name in ("s", "gamma", "b", "d", "n0", "n_min", "n_max", "a_min",
                 "a_max", "a_step", "nu_max", "basis_size", "drop_tol",
                 "match_tol", "fd_delta", "out", "fmt", "self_test"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return RunConfig(**fields).validate()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {out}", file=sys.stderr)


def _emit_table(table, cfg: RunConfig) -> None:
    if cfg.fmt == "object":
        _emit(json.dumps(table.to_object(), indent=2) + "\n", cfg.out)
    else:
        _emit(render_table(table), cfg.out)


def _run_figure_files(cfg: RunConfig) -> None:
    dataset = run_figure(cfg)
    prefix = cfg.out or "figure"
    curves_path = f"{prefix}_curves.tsv"
    points_path = f"{prefix}_points.tsv"
    meta_path = f"{prefix}_meta.json"
    with open(curves_path, "w", encoding="utf-8") as fh:
        fh.write(render_table(dataset.curves))
    with open(points_path, "w", encoding="utf-8") as fh:
        fh.write(render_table(dataset.points))
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(jsonable(dataset.metadata), fh, indent=2)
        fh.write("\n")
    for path in (curves_path, points_path, meta_path):
        print(f"wrote {path}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        if cfg.command == "truncate":
            _emit_table(run_truncate(cfg), cfg)
        elif cfg.command == "heun-roots":
            _emit_table(run_heun_roots(cfg), cfg)
        elif cfg.command == "curves":
            _emit_table(run_curves(cfg), cfg)
        elif cfg.command == "figure":
            _run_figure_files(cfg)
        elif cfg.command == "verify":
            report = run_verify(cfg)
            _emit_table(report.to_table(), cfg)
            if not report.all_passed:
                failed = [c.name for c in report.checks if not c.passed]
                print(f"verification failed: {', '.join(failed)}",
                      file=sys.stderr)
                return EXIT_VERIFICATION
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
