"""Benchmark problems with known (or self-referenced) solutions and the
weighted-error convergence tables."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.special

from .solver import ProblemSpec, SolveReport, build_and_solve
from .vp_basis import VPParams
from .vp_interp import DEFAULT_MESH_SIZE, VPFunction

PI = math.pi
TABLE_N = (8, 16, 32, 64, 128, 256, 512)
EXAMPLE2_REFERENCE_N = 1024  # table label N, so n = 1536

# VP columns of the published tables: row label N -> (cond, error)
PUBLISHED_TABLES = {
    1: {8: (1.95, 2.91e-3), 16: (2.05, 8.08e-4), 32: (2.10, 2.13e-4), 64: (2.12, 5.48e-4),
        128: (2.13, 1.34e-5), 256: (2.14, 2.83e-6), 512: (2.15, 3.81e-7)},
    2: {8: (2.47, 6.91e-6), 16: (2.60, 8.50e-8), 32: (2.66, 1.08e-9), 64: (2.69, 1.39e-11),
        128: (2.71, 2.03e-13), 256: (2.72, 4.53e-15)},
    3: {8: (2.64, 5.44e-4), 16: (2.77, 1.46e-4), 32: (2.84, 3.80e-5), 64: (2.87, 9.70e-6),
        128: (2.89, 2.45e-6), 256: (2.89, 6.15e-7), 512: (2.90, 1.54e-7)},
    4: {8: (2.93, 3.24e-4), 16: (3.22, 1.97e-5), 32: (3.36, 5.87e-7), 64: (3.43, 1.84e-8),
        128: (3.47, 6.05e-10), 256: (3.49, 4.69e-12), 512: (3.50, 7.41e-14)},
}

# series fallbacks in the Example 1 right-hand side
_G1_SMALL_Y = 1e-6
_G1_NEAR_ONE = 1e-10


def _g1_log_factor(y: np.ndarray) -> np.ndarray:
    """y * log((1+s)/(1-s)) / s with s = sqrt(1-y^2), finite on [-1, 1]."""
    y = np.asarray(y, dtype=float)
    ay = np.abs(y)
    s = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    out = np.zeros_like(y)
    mid = (ay >= _G1_SMALL_Y) & (1.0 - ay >= _G1_NEAR_ONE)
    # log((1+s)/(1-s)) = 2 log((1+s)/|y|), avoiding the cancellation in 1-s
    out[mid] = y[mid] * 2.0 * (np.log1p(s[mid]) - np.log(ay[mid])) / s[mid]
    edge = 1.0 - ay < _G1_NEAR_ONE
    # 2 atanh(s)/s = 2 (1 + s^2/3 + ...)
    out[edge] = y[edge] * 2.0 * (1.0 + s[edge] ** 2 / 3.0)
    small = (ay < _G1_SMALL_Y) & (ay > 0)
    # s ~ 1 - y^2/2: y * 2 (log 2 - log|y|) to first order
    out[small] = y[small] * 2.0 * (math.log(2.0) - np.log(ay[small]))
    return out


def g_example1(y):
    y = np.asarray(y, dtype=float)
    ay = np.abs(y)
    return (y * ((1 + 4 * y / (15 * PI)) * ay + 6 / PI)
            + (3 * y * y - 2) / PI * _g1_log_factor(y))


def g_example3(y):
    y = np.asarray(y, dtype=float)
    return 2 + np.abs(y) / 2 + 2 / (3 * PI) + 0.25 * (1 - 2 * y * y + math.log(4.0))


def f_example4(y):
    y = np.asarray(y, dtype=float)
    return np.clip(1.0 - y * y, 0.0, None) ** 1.5


def _xlogx(t):
    """t log t, extended by 0 at t = 0."""
    return scipy.special.xlogy(t, t)


def d_f_example4(y):
    """Hypersingular operator applied to (1-y^2)^{3/2}, closed form."""
    y = np.asarray(y, dtype=float)
    # 4y(1-y^2) log((1-y)/(1+y)), written to stay finite at y = +-1
    tail = 4 * y * ((1 + y) * _xlogx(1 - y) - (1 - y) * _xlogx(1 + y))
    return (16 / 3 - 8 * y * y + tail) / PI


def _k4_factor(y):
    # (y^5/5 - 2y^3/3 + y - 8/15) = -(1-y) * _k4_factor(y)
    return y**4 / 5 + y**3 / 5 - 7 * y * y / 15 - 7 * y / 15 + 8 / 15


def k_f_example4(y):
    """Log-kernel operator applied to (1-y^2)^{3/2}, closed form.

    The logarithmic part y(y^4/5 - 2y^2/3 + 1) log((1-y)/(1+y)) - (8/15) log(1-y^2)
    is regrouped so that each logarithm carries a vanishing factor at its endpoint.
    """
    y = np.asarray(y, dtype=float)
    y2 = y * y
    logs = -_k4_factor(y) * _xlogx(1 - y) - _k4_factor(-y) * _xlogx(1 + y)
    return (368 / 225 - 6 * y2 / 5 + 2 * y2 * y2 / 5 + logs) / PI


def g_example4(y):
    return 2 * f_example4(y) + d_f_example4(y) + k_f_example4(y)


def example4_coeff(j: int) -> float:
    """<(1-x^2)^{3/2}, p_j>: nonzero only for even j."""
    if j % 2:
        return 0.0
    k = j + 1
    return math.sqrt(2 / PI) * 48.0 / (k * (k * k - 4) * (k * k - 16))


def example(id: int) -> ProblemSpec:
    if id == 1:
        return ProblemSpec(
            sigma=1.0, include_K=False,
            kernel_h=lambda x, y: x * (y * y * np.abs(y) + x * np.abs(x)),
            rhs_g=g_example1,
            exact_f=lambda y: np.asarray(y, dtype=float) * np.abs(y),
            name="example 1",
        )
    if id == 2:
        return ProblemSpec(
            sigma=1.0, include_K=True,
            kernel_h=lambda x, y: np.abs(np.cos(y - PI / 4)) ** 4.5 + np.abs(np.sin(x)) ** 3.5,
            rhs_g=lambda y: np.abs(np.asarray(y, dtype=float)) ** 5.5,
            reference_params=VPParams.from_N(EXAMPLE2_REFERENCE_N),
            name="example 2",
        )
    if id == 3:
        return ProblemSpec(
            sigma=1.0, include_K=True,
            kernel_h=lambda x, y: np.abs(y) + np.abs(x),
            rhs_g=g_example3,
            exact_f=lambda y: np.ones_like(np.asarray(y, dtype=float)),
            name="example 3",
        )
    if id == 4:
        return ProblemSpec(
            sigma=2.0, include_K=True, kernel_h=None,
            rhs_g=g_example4, exact_f=f_example4,
            name="example 4",
        )
    raise ValueError(f"unknown example id {id!r}; expected 1..4")


def uniform_mesh(size: int = DEFAULT_MESH_SIZE) -> np.ndarray:
    if size < 2:
        raise ValueError("mesh_size must be >= 2")
    return np.linspace(-1.0, 1.0, size)


def weighted_error(solution: VPFunction, reference, mesh_size: int = DEFAULT_MESH_SIZE) -> float:
    """max over a uniform mesh of |f - f_n| * sqrt(1 - x^2)."""
    x = uniform_mesh(mesh_size)
    w = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    ref = reference(x) if callable(reference) else np.asarray(reference, dtype=float)
    return float(np.max(np.abs(ref - solution(x)) * w))


@dataclass
class ErrorReport:
    n: int
    m: int
    error_weighted: float
    cond_inf: float
    mesh_size: int
    label: int = 0
    path: str = ""
    elapsed_s: float = 0.0
    residual_inf: float = 0.0


def table_params(label: int, convention: str = "N") -> VPParams:
    """Parameters behind a table row.

    ``"N"``: the row label is N, with n = 3N/2 nodes and m = N/2.
    ``"n"``: the row label is n itself, with m = max(1, round(n/3)).
    """
    if convention == "N":
        return VPParams.from_N(label)
    if convention == "n":
        return VPParams.from_n(label)
    raise ValueError(f"unknown convention {convention!r}")


@lru_cache(maxsize=8)
def reference_solution(id: int, params: VPParams) -> VPFunction:
    return build_and_solve(example(id), params, compute_cond=False).solution


def solve_example(id: int, params: VPParams) -> SolveReport:
    return build_and_solve(example(id), params)


def error_report(id: int, params: VPParams, mesh_size: int = DEFAULT_MESH_SIZE,
                 reference_params: VPParams | None = None, label: int = 0) -> ErrorReport:
    problem = example(id)
    rep = build_and_solve(problem, params)
    if problem.exact_f is not None:
        err = weighted_error(rep.solution, problem.exact_f, mesh_size)
    else:
        ref = reference_solution(id, reference_params or problem.reference_params)
        err = weighted_error(rep.solution, ref, mesh_size)
    return ErrorReport(n=params.n, m=params.m, error_weighted=err, cond_inf=rep.cond_inf,
                       mesh_size=mesh_size, label=label or params.n, path=rep.path.value,
                       elapsed_s=rep.elapsed, residual_inf=rep.residual_inf)


def _threads() -> int:
    try:
        return max(0, int(os.environ.get("PRANDTL_VP_THREADS", "0")))
    except ValueError:
        return 0


def run_table(id: int, n_list=TABLE_N, mesh_size: int = DEFAULT_MESH_SIZE,
              convention: str = "N") -> list[ErrorReport]:
    """One row per label in ``n_list`` (see :func:`table_params`)."""
    n_list = list(n_list)
    if n_list != sorted(n_list):
        raise ValueError("n_list must be ascending")
    params_list = [table_params(label, convention) for label in n_list]
    problem = example(id)
    if problem.reference_params is not None:
        reference_solution(id, problem.reference_params)  # build once before fanning out
    workers = _threads()
    job = lambda pl: error_report(id, pl[0], mesh_size, label=pl[1])
    if workers > 0:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(job, zip(params_list, n_list)))
    return [job(pl) for pl in zip(params_list, n_list)]


CSV_HEADER = ("n", "m", "error_weighted", "cond_inf", "path", "elapsed_s")


def table_csv(rows: list[ErrorReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.n, r.m, f"{r.error_weighted:.17g}", f"{r.cond_inf:.17g}", r.path, f"{r.elapsed_s:.6f}"])
    return buf.getvalue()


def table_markdown(rows: list[ErrorReport], title: str = "") -> str:
    lines = []
    if title:
        lines += [f"**{title}**", ""]
    lines += ["| N | n | m | cond | E_n |", "|---|---|---|---|---|"]
    for r in rows:
        lines.append(f"| {r.label} | {r.n} | {r.m} | {r.cond_inf:.3g} | {r.error_weighted:.3g} |")
    return "\n".join(lines) + "\n"
