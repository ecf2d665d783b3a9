"""Batch command-line front-end.

Subcommands: ``estimate`` (one functional value at one t, JSON),
``curve`` (CSV/JSON curve data over a t-grid), ``limits`` (comparison-bound
reports, JSON), ``reproduce`` (re-run a reference table and grade each
cell), ``verify-identities`` (integration-by-parts sweep) and ``export-set``
(write a built-in vector set as plain text).

Exit codes: 0 success, 1 a check or bound failed, 2 validation error,
3 runtime error.  Seed, sample count and generator are echoed into every
output so any artifact documents how to regenerate itself.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels, limits
from .errors import GausscompError, ValidationError
from .estimators import DerivativeRoute, ibp_suite, dpsi_computed, dpsi_standard, psi_direct
from .fixtures import FIXTURE_NAMES, fixture, table_ids
from .model import Variant, load_set, make_params, save_set
from .quadrature import integrate_curve, uniform_grid
from .reproduce import run_table
from .sampling import GENERATOR_NAME, SeedPlan

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3

SEED_ENV = "GAUSSCOMP_SEED"
DEFAULT_SEED = 1


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "")
    return int(raw) if raw.strip() else DEFAULT_SEED


def _resolve_set(spec: str):
    if spec in FIXTURE_NAMES:
        return fixture(spec)
    return load_set(spec)


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise ValidationError(f"--t-grid expects start:stop:step, got {spec!r}") from None
    if step <= 0 or stop <= start:
        raise ValidationError(f"bad grid {spec!r}: need stop > start and step > 0")
    return uniform_grid(start, stop, step)


def _params_from(args, vset):
    variant = Variant(args.variant)
    return make_params(
        vset, variant, m=args.m, beta=args.beta, s=args.sign,
        c3=args.c3 if variant is Variant.LIFTED else None,
    )


def _common_metadata(args) -> dict:
    return {
        "seed": args.seed,
        "samples": args.samples,
        "generator": GENERATOR_NAME,
        "backend": kernels.active_backend(),
        "set": args.set,
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def cmd_estimate(args) -> int:
    vset = _resolve_set(args.set)
    params = _params_from(args, vset)
    plan = SeedPlan(args.seed, args.samples)
    if args.quantity == "psi":
        est = psi_direct(vset, params, args.t, plan)
    elif DerivativeRoute(args.route) is DerivativeRoute.STANDARD:
        est = dpsi_standard(vset, params, args.t, plan)
    else:
        est = dpsi_computed(vset, params, args.t, plan)
    payload = {
        "quantity": args.quantity,
        "route": args.route if args.quantity == "dpsi" else None,
        "t": args.t,
        "estimate": est.as_dict(),
        "metadata": {**_common_metadata(args), "variant": args.variant,
                     "beta": args.beta, "s": args.sign, "c3": params.c3},
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def _curve_rows(curve, lifted: bool, beta: float, c3, n: int):
    for k, t in enumerate(curve.t_grid):
        dstd = curve.dpsi_standard[k]
        dcomp = curve.dpsi_computed[k]
        psi = curve.psi_direct[k]
        row = [t, dstd.mean, dstd.std_error, dcomp.mean, dcomp.std_error,
               curve.psi_from_standard[k], curve.psi_from_computed[k],
               psi.mean, psi.std_error]
        if lifted:
            row.append(limits.adjusted_value(psi.mean, beta, c3, n))
        yield row


def cmd_curve(args) -> int:
    vset = _resolve_set(args.set)
    params = _params_from(args, vset)
    plan = SeedPlan(args.seed, args.samples)
    grid = _parse_grid(args.t_grid)
    curve = integrate_curve(vset, params, grid, plan)
    lifted = params.variant is Variant.LIFTED

    header = ["t", "dpsi_standard", "se", "dpsi_computed", "se",
              "psi_int_standard", "psi_int_computed", "psi_direct", "se"]
    if lifted:
        header.append("adjusted_value")
    rows = list(_curve_rows(curve, lifted, params.beta, params.c3, vset.n))

    bias_max = float(max(curve.psi_from_standard_bias[-1], curve.psi_from_computed_bias[-1]))
    if args.format == "json":
        payload = {
            "columns": header,
            "rows": [[float(v) for v in row] for row in rows],
            "quadrature_bias": {
                "standard": [float(v) for v in curve.psi_from_standard_bias],
                "computed": [float(v) for v in curve.psi_from_computed_bias],
            },
            "metadata": {**_common_metadata(args), **curve.metadata,
                         "t_grid": args.t_grid, "skipped": curve.skipped},
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return EXIT_OK

    lines = [
        "# gausscomp curve",
        f"# seed={args.seed} samples={args.samples} generator={GENERATOR_NAME}"
        f" backend={kernels.active_backend()}",
        f"# set={args.set} variant={args.variant} beta={_fmt(args.beta)}"
        f" s={args.sign} c3={'none' if params.c3 is None else _fmt(params.c3)}"
        f" t_grid={args.t_grid} skipped={curve.skipped}",
        f"# trapezoid_bias_max={_fmt(bias_max)}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_limits(args) -> int:
    vset = _resolve_set(args.set)
    plan = SeedPlan(args.seed, args.samples)
    general = args.general or not vset.unit_flag
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    known = ("slepian", "gordon", "lifted-slepian", "lifted-gordon", "chain")
    for c in checks:
        if c not in known:
            raise ValidationError(f"unknown check {c!r}; known: {', '.join(known)}")
    reports = []
    for c in checks:
        if c == "slepian":
            reports.append(limits.slepian_gordon_check(vset, 1, plan, general=general, m=args.m))
        elif c == "gordon":
            reports.append(limits.slepian_gordon_check(vset, -1, plan, general=general, m=args.m))
        elif c == "lifted-slepian":
            reports.append(limits.lifted_bound_check(vset, 1, args.c3s, plan, m=args.m))
        elif c == "lifted-gordon":
            reports.append(limits.lifted_bound_check(vset, -1, args.c3s, plan, m=args.m))
        elif c == "chain":
            reports.append(limits.chain_bound_check(vset, args.sign, args.c3s, plan, m=args.m))
    payload = [r.as_dict() for r in reports]
    for r in payload:
        r["metadata"].update(_common_metadata(args))
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_reproduce(args) -> int:
    run = run_table(args.table, args.seed, samples=args.samples)
    by_col: dict = {}
    for cell in run.cells:
        by_col.setdefault(cell.column, []).append(cell)
    lines = [
        f"table={args.table} set={run.table.set_name} variant={run.table.variant.value}"
        f" beta={run.table.beta} s={run.table.s}"
        + (f" c3={run.table.c3}" if run.table.c3 is not None else "")
        + f" samples={args.samples or run.table.samples} seed={args.seed}",
    ]
    for column, cells in by_col.items():
        marks = " ".join("ok" if c.ok else "FAIL" for c in cells)
        lines.append(f"{column:22s} tol={cells[0].tol:.3g}  {marks}")
    failing = run.failing()
    if failing:
        lines.append(f"{len(failing)} failing cell(s):")
        for c in failing:
            lines.append(
                f"  t={c.t:.1f} {c.column}: got {c.got:.4f}, expected "
                f"{c.expected:.4f} (tol {c.tol})"
            )
    else:
        lines.append(f"all {len(run.cells)} cells within tolerance")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if run.passed else EXIT_CHECK_FAILED


def cmd_verify_identities(args) -> int:
    vset = _resolve_set(args.set)
    params = _params_from(args, vset)
    plan = SeedPlan(args.seed, args.samples)
    results = ibp_suite(vset, params, plan, ts=(0.25, 0.5, 0.75))
    lines = [
        f"# identities variant={args.variant} set={args.set} beta={_fmt(args.beta)}"
        f" s={args.sign} seed={args.seed} samples={args.samples}",
        f"{'identity':12s} {'t':>5s} {'i':>3s} {'j':>3s} {'lhs':>12s} {'rhs':>12s} {'z':>8s}",
    ]
    worst = 0.0
    for r in results:
        worst = max(worst, abs(r.z))
        lines.append(
            f"{r.identity:12s} {r.t:5.2f} {r.i + 1:3d} {r.j + 1:3d} "
            f"{r.lhs.mean:12.6f} {r.rhs.mean:12.6f} {r.z:8.2f}"
        )
    ok = worst <= args.z_max
    lines.append(f"max |z| = {worst:.2f} (threshold {args.z_max})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_export_set(args) -> int:
    vset = _resolve_set(args.set)
    save_set(vset, args.out, header=f"gausscomp set={args.set}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausscomp",
        description="Monte Carlo estimation and cross-validation of interpolated "
                    "Gaussian comparison functionals",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", default="x_plus",
                        help="builtin set name (x_plus, x_minus) or a text-matrix file path")
    common.add_argument("--variant", choices=[v.value for v in Variant], default="spherical")
    common.add_argument("--beta", type=float, default=3.0)
    common.add_argument("--sign", type=int, choices=(-1, 1), default=1)
    common.add_argument("--c3", type=float, default=0.1, help="lifting exponent (lifted variant)")
    common.add_argument("--m", type=int, default=5, help="row dimension of the Gaussian matrix")
    common.add_argument("--samples", type=int, default=30000)
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help=f"master seed (default from ${SEED_ENV} if set)")
    common.add_argument("--workers", type=int, default=None,
                        help="worker threads for the accelerated backend")
    common.add_argument("--backend", choices=("numpy", "numba"), default=None,
                        help=f"kernel backend (default: ${kernels.BACKEND_ENV} or numba)")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common],
                       help="one functional estimate at one t, as JSON")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--quantity", choices=("psi", "dpsi"), default="psi")
    p.add_argument("--route", choices=[r.value for r in DerivativeRoute], default="computed")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("curve", parents=[common],
                       help="derivative and reconstructed-curve data over a t-grid")
    p.add_argument("--t-grid", default="0:1:0.05", help="start:stop:step")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("limits", parents=[common], help="comparison-bound reports as JSON")
    p.add_argument("--checks", default="slepian,gordon,lifted-slepian,lifted-gordon",
                   help="comma list: slepian, gordon, lifted-slepian, lifted-gordon, chain")
    p.add_argument("--c3s", type=float, default=0.3, help="exponent scale for lifted/chain checks")
    p.add_argument("--general", action="store_true",
                   help="norm-weighted forms (automatic for non-unit sets)")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("reproduce", parents=[common],
                       help="re-run a reference table and grade each cell")
    p.add_argument("table", choices=table_ids())
    p.set_defaults(func=cmd_reproduce, samples=None)

    p = sub.add_parser("verify-identities", parents=[common],
                       help="integration-by-parts identity sweep")
    p.add_argument("--z-max", type=float, default=4.0)
    p.set_defaults(func=cmd_verify_identities, beta=1.0, samples=100000)

    p = sub.add_parser("export-set", parents=[common],
                       help="write a vector set in the plain-text matrix format")
    p.set_defaults(func=cmd_export_set)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "backend", None):
            kernels.set_backend(args.backend)
        if getattr(args, "workers", None):
            kernels.set_worker_threads(args.workers)
        if args.command == "export-set" and not args.out:
            raise ValidationError("export-set requires --out")
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GausscompError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
