"""Command line front-end: ``prandtl-vp {solve,table,probe}``."""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import benchmarks
from .chebyshev import discrete_coeffs, grid
from .operators import operator_coeffs, system_band
from .solver import NumericalError, build_and_solve, dominance_margins, solve_band_system, \
    solve_parity_split, solve_system
from .vp_basis import VPParams
from .vp_interp import DEFAULT_MESH_SIZE, lebesgue_probe


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _even(text: str) -> int:
    v = int(text)
    if v < 2 or v % 2:
        raise argparse.ArgumentTypeError("N must be a positive even integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prandtl-vp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one benchmark or a sampled right-hand side")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", type=int, choices=range(1, 5))
    src.add_argument("--samples", metavar="FILE", help="CSV with columns k,g_value (k is 1-based)")
    size = s.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int, help="number of collocation nodes")
    size.add_argument("--N", type=_even, help="even N: n = 3N/2, m = N/2")
    s.add_argument("--m", type=int, help="filter half-width (default round(n/3)); only with --n")
    s.add_argument("--sigma", type=float, default=0.0, help="sigma for --samples mode")
    s.add_argument("--with-K", action="store_true", help="include the log-kernel term (--samples mode)")
    s.add_argument("--dense", action="store_true", help="use pivoted dense elimination instead of the banded path")
    s.add_argument("--mesh-size", type=int, default=DEFAULT_MESH_SIZE)
    s.add_argument("--format", dest="output_format", choices=("csv", "md"), default="csv")
    s.add_argument("--output")

    t = sub.add_parser("table", help="convergence/conditioning table for a benchmark")
    t.add_argument("--example", type=int, choices=range(1, 5), required=True)
    t.add_argument("--n", type=_int_list, default=list(benchmarks.TABLE_N), help="row labels, e.g. 8,16,32")
    t.add_argument("--convention", choices=("N", "n"), default="N",
                   help="N: label is N (n=3N/2, m=N/2); n: label is n (m=round(n/3))")
    t.add_argument("--mesh-size", type=int, default=DEFAULT_MESH_SIZE)
    t.add_argument("--format", dest="output_format", choices=("csv", "md"), default="csv")
    t.add_argument("--output")

    p = sub.add_parser("probe", help="invariant scans")
    p.add_argument("--what", choices=("lebesgue", "dominance", "decoupling"), required=True)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--m", type=int, help="fixed m (default round(n/3))")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mesh-size", type=int, default=DEFAULT_MESH_SIZE)
    p.add_argument("--format", dest="output_format", choices=("csv", "md"), default="csv")
    p.add_argument("--output")
    return ap


def _emit(header, rows, fmt, path):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])
        text = buf.getvalue()
    else:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for r in rows:
            lines.append("| " + " | ".join(f"{v:.3g}" if isinstance(v, float) else str(v) for v in r) + " |")
        text = "\n".join(lines) + "\n"
    _write(text, path)


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> VPParams:
    if args.N is not None:
        if args.m is not None:
            raise ValueError("--m cannot be combined with --N")
        return VPParams.from_N(args.N)
    if args.m is not None:
        return VPParams(args.n, args.m)
    return VPParams.from_n(args.n)


def read_samples(path: str, n: int) -> np.ndarray:
    vals = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"k", "g_value"}:
            raise ValueError("samples file must have header k,g_value")
        for row in reader:
            vals[int(row["k"])] = float(row["g_value"])
    if sorted(vals) != list(range(1, n + 1)):
        raise ValueError(f"samples file must list k = 1..{n} exactly once each (grid size n={n})")
    return np.array([vals[k] for k in range(1, n + 1)])


def _solve(args):
    params = _params(args)
    if args.example is not None:
        problem = benchmarks.example(args.example)
        rep = build_and_solve(problem, params, force_dense=args.dense)
        if problem.exact_f is not None:
            err = benchmarks.weighted_error(rep.solution, problem.exact_f, args.mesh_size)
        else:
            ref = benchmarks.reference_solution(args.example, problem.reference_params)
            err = benchmarks.weighted_error(rep.solution, ref, args.mesh_size)
        header = ("n", "m", "cond_inf", "error_weighted", "residual_inf", "path")
        row = (params.n, params.m, rep.cond_inf, err, rep.residual_inf, rep.path.value)
    else:
        samples = read_samples(args.samples, params.n)
        g = discrete_coeffs(samples, grid(params.n))
        rep = solve_system(params, args.sigma, g, include_K=args.with_K, force_dense=args.dense)
        header = ("n", "m", "cond_inf", "residual_inf", "path")
        row = (params.n, params.m, rep.cond_inf, rep.residual_inf, rep.path.value)
    _emit(header, [row], args.output_format, args.output)


def _table(args):
    rows = benchmarks.run_table(args.example, args.n, args.mesh_size, convention=args.convention)
    if args.output_format == "csv":
        text = benchmarks.table_csv(rows)
    else:
        text = benchmarks.table_markdown(rows, title=f"Example {args.example}")
    _write(text, args.output)


def _probe_params(args, n):
    return VPParams(n, args.m) if args.m is not None else VPParams.from_n(n)


def _probe(args):
    rows = []
    if args.what == "lebesgue":
        mesh = np.linspace(-1, 1, args.mesh_size)
        for n in args.n:
            p = _probe_params(args, n)
            rows.append((p.n, p.m, lebesgue_probe(p, mesh)))
        header = ("n", "m", "lebesgue")
    elif args.what == "dominance":
        for n in args.n:
            p = _probe_params(args, n)
            margin = float(dominance_margins(system_band(operator_coeffs(p, args.sigma))).min())
            rows.append((p.n, p.m, args.sigma, margin))
        header = ("n", "m", "sigma", "min_row_margin")
    else:
        rng = np.random.default_rng(0)
        for n in args.n:
            p = _probe_params(args, n)
            band = system_band(operator_coeffs(p, args.sigma))
            rhs = rng.standard_normal(p.n)
            diff = float(np.max(np.abs(solve_band_system(band, rhs) - solve_parity_split(band, rhs))))
            rows.append((p.n, p.m, args.sigma, diff))
        header = ("n", "m", "sigma", "max_abs_diff")
    _emit(header, rows, args.output_format, args.output)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        {"solve": _solve, "table": _table, "probe": _probe}[args.command](args)
    except (ValueError, TypeError) as exc:
        print(f"prandtl-vp: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"prandtl-vp: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
