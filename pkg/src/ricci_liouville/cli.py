"""Command line front end.

Subcommands: derive, verify, mesh, classify, sweep, pmc.  Exit codes:
0 success, 1 negative verification verdict, 2 usage or parameter error,
3 numerical failure.  Every run writes exactly one manifest.json next to
its outputs; data outputs are byte-deterministic for identical inputs.
The environment variable RICCI_LIOUVILLE_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConvergenceError, NotInFamilyError, ParameterError
from .metric import MetricParams, derive_constants
from .pmc import SubfamilyBranch, pmc_report
from .revolution import (
    metric_from_profile,
    profile_from_metric,
    mesh_to_obj,
    mesh_to_ply,
    tessellate,
)
from .verify import (
    GridSpec,
    estimate_order,
    fit_normalization,
    in_family_verdict,
    grid_to_csv,
    ricci_order_1d,
    ricci_residual_grid,
    sample_grid,
    summary_to_json,
)
from .fileio import write_atomic, write_manifest

DEFAULT_B = 1.0 / math.sqrt(6.0)
_SWEEP_DEFAULT_B = (DEFAULT_B, 0.5, 1.0)
_SWEEP_DEFAULT_C1 = (0.25, 1.0, 4.0)
_SWEEP_DEFAULT_C2 = (-2.0, 0.0, 3.0)
_SWEEP_DEFAULT_H = (0.02, 0.01, 0.005)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _points_for(lo: float, hi: float, h: float, name: str) -> int:
    if h <= 0.0:
        raise ParameterError(f"{name} spacing h must be positive")
    n = int(round((hi - lo) / h)) + 1
    if n < 2 or abs((hi - lo) / (n - 1) - h) > 1e-9 * max(1.0, h):
        raise ParameterError(f"h = {h} does not evenly divide the {name} range")
    return n


def _grid_from_args(args) -> GridSpec:
    v_lo = args.v_lo if args.v_lo is not None else args.u_lo
    v_hi = args.v_hi if args.v_hi is not None else args.u_hi
    nu = _points_for(args.u_lo, args.u_hi, args.h, "u")
    nv = _points_for(v_lo, v_hi, args.h, "v")
    return GridSpec(args.u_lo, args.u_hi, v_lo, v_hi, nu, nv)


def cmd_derive(args) -> int:
    p = MetricParams(b=args.b, c1=args.c1, c2=args.c2)
    dc = derive_constants(p)
    payload = {
        "b": p.b,
        "c1": p.c1,
        "c2": p.c2,
        "disc": dc.disc,
        "s": dc.s,
        "k": dc.k.k,
        "k2": dc.k.k2,
        "lambda_plus": dc.lambda_plus,
        "lambda_minus": dc.lambda_minus,
        "u_max": dc.u_max,
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    write_manifest(
        args.outdir,
        "derive",
        {"b": p.b, "c1": p.c1, "c2": p.c2},
        [],
        payload,
        __version__,
    )
    return 0


def cmd_verify(args) -> int:
    p = MetricParams(b=args.b, c1=args.c1, c2=args.c2)
    spec = _grid_from_args(args)
    if args.levels < 2:
        raise ParameterError("--levels must be at least 2")

    grid = sample_grid(p, spec)
    max_res = ricci_residual_grid(grid, p.b)
    hs, rs = [spec.h], [max_res]
    for lev in range(1, args.levels):
        fine = spec.refined(2**lev)
        hs.append(fine.h)
        rs.append(ricci_residual_grid(sample_grid(p, fine), p.b))
    order = estimate_order(hs, rs)
    fit = fit_normalization(grid.lambda_field[:, 0], p.b, spec.h, u0=spec.u_lo)
    verdict = in_family_verdict(max_res, order, spec.h)

    outdir = Path(args.outdir)
    csv_path = outdir / "residuals.csv"
    json_path = outdir / "summary.json"
    write_atomic(csv_path, grid_to_csv(grid))
    write_atomic(json_path, summary_to_json(max_res, order, fit, spec.h, verdict))
    write_manifest(
        args.outdir,
        "verify",
        {
            "b": p.b,
            "c1": p.c1,
            "c2": p.c2,
            "u_lo": spec.u_lo,
            "u_hi": spec.u_hi,
            "v_lo": spec.v_lo,
            "v_hi": spec.v_hi,
            "h": spec.h,
            "levels": args.levels,
        },
        [csv_path.name, json_path.name],
        {"max_residual": max_res, "order": order, "verdict": verdict},
        __version__,
    )
    return 0 if verdict else 1


def cmd_mesh(args) -> int:
    p = MetricParams(b=args.b, c1=args.c1, c2=args.c2)
    if args.format not in ("obj", "ply"):
        raise ParameterError("--format must be obj or ply")
    profile = profile_from_metric(
        p, (args.u_lo, args.u_hi), tol=args.tol, n=args.nu
    )
    mesh = tessellate(profile, args.v_lo, args.v_hi, args.nv)
    outdir = Path(args.outdir)
    out_path = outdir / f"surface.{args.format}"
    if args.format == "obj":
        write_atomic(out_path, mesh_to_obj(mesh))
    else:
        write_atomic(out_path, mesh_to_ply(mesh))
    write_manifest(
        args.outdir,
        "mesh",
        {
            "b": p.b,
            "c1": p.c1,
            "c2": p.c2,
            "u_lo": args.u_lo,
            "u_hi": args.u_hi,
            "v_lo": args.v_lo,
            "v_hi": args.v_hi,
            "nu": args.nu,
            "nv": args.nv,
            "tol": args.tol,
            "format": args.format,
        },
        [out_path.name],
        {"vertices": len(mesh.vertices), "faces": len(mesh.faces), "closed": mesh.closed},
        __version__,
    )
    return 0


def _read_profile_csv(path):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(cell) for cell in row] for row in reader if row]
    except (OSError, StopIteration, ValueError, csv.Error) as exc:
        raise ParameterError(f"cannot parse profile CSV {path}: {exc}") from exc
    cols = [c.strip().lower() for c in header]
    if len(cols) != 3 or cols[0] not in ("s", "u") or cols[1] != "x" or cols[2] != "y":
        raise ParameterError(
            f"profile CSV must have header s,x,y (or u,x,y), got {header}"
        )
    if len(rows) < 4:
        raise ParameterError("profile CSV needs at least 4 samples")
    data = np.asarray(rows, dtype=float)
    return data[:, 0], data[:, 1], data[:, 2]


def cmd_classify(args) -> int:
    s, x, y = _read_profile_csv(args.profile)
    outdir = Path(args.outdir)
    verdict_path = outdir / "verdict.json"

    def emit(payload) -> None:
        write_atomic(
            verdict_path, json.dumps(payload, sort_keys=True, indent=2) + "\n"
        )
        write_manifest(
            args.outdir,
            "classify",
            {"profile": str(args.profile), "b": args.b, "resample_n": args.resample_n},
            [verdict_path.name],
            payload,
            __version__,
        )

    u_grid, lam = metric_from_profile(s, x, y, args.resample_n)
    h = u_grid[1] - u_grid[0]
    try:
        order, maxima = ricci_order_1d(np.log(lam), args.b, h)
        fit = fit_normalization(lam, args.b, h, u0=float(u_grid[0]))
    except NotInFamilyError as exc:
        emit({"verdict": f"rejected: {exc}", "sample_index": exc.index})
        return 1

    # the affine deviation of F = log(lambda^2 sqrt(-2 b^2 - K)) carries one
    # stencil layer instead of two, so its O(h^2) constant suits the floor
    ok = in_family_verdict(fit.max_affine_residual, order, h)
    emit(
        {
            "verdict": "in family" if ok else "not in family at sampled resolution",
            "max_residual": maxima[0],
            "order": order,
            "h": h,
            "c1_fit": fit.c1_fit,
            "c2_fit": fit.c2_fit,
            "max_affine_residual": fit.max_affine_residual,
        }
    )
    return 0 if ok else 1


def _parse_values(text: str, name: str):
    if text.strip() == "":
        return []
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ParameterError(f"cannot parse {name} value list {text!r}") from exc


def _sweep_point(task):
    """Evaluate one sweep triple; returns a row dict.  Top level for pickling."""
    b, c1, c2, u_lo, u_hi, h_levels = task
    try:
        p = MetricParams(b=b, c1=c1, c2=c2)
        hs, rs = [], []
        for h in h_levels:
            nu = int(round((u_hi - u_lo) / h)) + 1
            spec = GridSpec(u_lo, u_hi, u_lo, u_hi, nu, nu)
            rs.append(ricci_residual_grid(sample_grid(p, spec), p.b))
            hs.append(spec.h)
        order = estimate_order(hs, rs)
        return {
            "c1": c1,
            "c2": c2,
            "b": b,
            "residual": rs[-1],
            "order": order,
            "status": "ok",
        }
    except (ParameterError, NotInFamilyError) as exc:
        return {
            "c1": c1,
            "c2": c2,
            "b": b,
            "residual": None,
            "order": None,
            "status": f"domain: {exc}",
        }


def cmd_sweep(args) -> int:
    bs = _parse_values(args.b_values, "--b-values")
    c1s = _parse_values(args.c1_values, "--c1-values")
    c2s = _parse_values(args.c2_values, "--c2-values")
    h_levels = _parse_values(args.h_levels, "--h-levels")
    if h_levels and min(h_levels) <= 0.0:
        raise ParameterError("h levels must be positive")
    if args.u_lo >= args.u_hi:
        raise ParameterError("need --u-lo < --u-hi")

    tasks = [
        (b, c1, c2, args.u_lo, args.u_hi, tuple(h_levels))
        for c1 in c1s
        for c2 in c2s
        for b in bs
    ]
    threads = int(os.environ.get("RICCI_LIOUVILLE_THREADS", "1"))
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]

    buf = io.StringIO()
    buf.write("c1,c2,b,residual,order,status\r\n")
    for row in rows:
        res = "" if row["residual"] is None else _fmt(row["residual"])
        order = "" if row["order"] is None else _fmt(row["order"])
        status = str(row["status"]).replace('"', "'")
        if "," in status:
            status = f'"{status}"'
        buf.write(
            f"{_fmt(row['c1'])},{_fmt(row['c2'])},{_fmt(row['b'])},{res},{order},{status}\r\n"
        )
    outdir = Path(args.outdir)
    csv_path = outdir / "sweep.csv"
    write_atomic(csv_path, buf.getvalue())
    n_ok = sum(1 for r in rows if r["status"] == "ok")
    write_manifest(
        args.outdir,
        "sweep",
        {
            "b_values": bs,
            "c1_values": c1s,
            "c2_values": c2s,
            "u_lo": args.u_lo,
            "u_hi": args.u_hi,
            "h_levels": h_levels,
        },
        [csv_path.name],
        {"rows": len(rows), "ok": n_ok},
        __version__,
    )
    return 0


def cmd_pmc(args) -> int:
    branch = SubfamilyBranch(c1=args.c1)
    report = pmc_report(branch, (args.u_lo, args.u_hi), args.n)
    outdir = Path(args.outdir)
    json_path = outdir / "pmc_report.json"
    text = report.to_json()
    write_atomic(json_path, text)
    print(text, end="")
    write_manifest(
        args.outdir,
        "pmc",
        {"c1": args.c1, "u_lo": args.u_lo, "u_hi": args.u_hi, "n": args.n},
        [json_path.name],
        {"verdict": report.verdict},
        __version__,
    )
    return 0 if report.verdict.startswith("hypotheses satisfied") else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricci-liouville",
        description=(
            "Construct, evaluate and certify special Liouville metrics whose "
            "curvature satisfies the Ricci-type condition, and realize them "
            "as surfaces of revolution."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(sp, with_c: bool = True):
        sp.add_argument("--b", type=float, default=DEFAULT_B,
                        help="half mean curvature norm (default 1/sqrt(6))")
        if with_c:
            sp.add_argument("--c1", type=float, required=True)
            sp.add_argument("--c2", type=float, required=True)
        sp.add_argument("--outdir", default=".", help="output directory (default .)")

    sp = sub.add_parser("derive", help="print the derived constants as JSON")
    add_params(sp)
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("verify", help="finite-difference residual of the curvature condition")
    add_params(sp)
    sp.add_argument("--u-lo", type=float, required=True)
    sp.add_argument("--u-hi", type=float, required=True)
    sp.add_argument("--v-lo", type=float, default=None, help="default: u range")
    sp.add_argument("--v-hi", type=float, default=None, help="default: u range")
    sp.add_argument("--h", type=float, required=True, help="grid spacing (square cells)")
    sp.add_argument("--levels", type=int, default=3, help="refinement levels for the order fit")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("mesh", help="tessellate the revolution surface, OBJ or binary PLY")
    add_params(sp)
    sp.add_argument("--u-lo", type=float, required=True)
    sp.add_argument("--u-hi", type=float, required=True)
    sp.add_argument("--nu", type=int, required=True, help="profile samples")
    sp.add_argument("--v-lo", type=float, required=True)
    sp.add_argument("--v-hi", type=float, required=True)
    sp.add_argument("--nv", type=int, required=True, help="mesh columns around the axis")
    sp.add_argument("--format", required=True, choices=("obj", "ply"))
    sp.add_argument("--tol", type=float, default=1e-10, help="profile quadrature tolerance")
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("classify", help="test whether a profile CSV induces a family metric")
    add_params(sp, with_c=False)
    sp.add_argument("--profile", required=True, help="CSV with header s,x,y (arc length)")
    sp.add_argument("--resample-n", type=int, required=True,
                    help="uniform u samples for the stencil (e.g. 51)")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="residual and convergence order over a parameter box")
    sp.add_argument("--b-values", default=",".join(map(str, _SWEEP_DEFAULT_B)))
    sp.add_argument("--c1-values", default=",".join(map(str, _SWEEP_DEFAULT_C1)))
    sp.add_argument("--c2-values", default=",".join(map(str, _SWEEP_DEFAULT_C2)))
    sp.add_argument("--u-lo", type=float, default=-0.5)
    sp.add_argument("--u-hi", type=float, default=0.5)
    sp.add_argument("--h-levels", default=",".join(map(str, _SWEEP_DEFAULT_H)))
    sp.add_argument("--outdir", default=".")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("pmc", help="report for the parallel mean curvature subfamily")
    sp.add_argument("--c1", type=float, required=True)
    sp.add_argument("--u-lo", type=float, required=True)
    sp.add_argument("--u-hi", type=float, required=True)
    sp.add_argument("--n", type=int, required=True, help="samples over the interval")
    sp.add_argument("--outdir", default=".")
    sp.set_defaults(func=cmd_pmc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotInFamilyError as exc:
        print(f"verdict: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # DomainError and friends: bad evaluation points are usage errors
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
