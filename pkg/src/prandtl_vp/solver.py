"""Assembly and solution of the collocation system

    (I + sigma V + A + B) f~ = g

for the q~-coefficients of the approximate solution.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .chebyshev import ChebyshevGrid, discrete_coeffs, grid
from .operators import BandMatrix, Kernel, assemble_B, operator_coeffs, system_band, OperatorCoeffs
from .vp_basis import VPParams, tables
from .vp_interp import Basis, VPFunction

RESIDUAL_RTOL = 1e-10


class NumericalError(RuntimeError):
    """A numerical precondition failed (singular matrix, lost dominance, ...)."""


class DominanceError(NumericalError):
    pass


class SolverPath(enum.Enum):
    BANDED = "banded"
    DENSE = "dense"


@dataclass
class ProblemSpec:
    """sigma f + D f + [K f] + [H f] = g on (-1, 1).

    ``reference_params`` asks for errors to be measured against our own solution
    at those parameters when no exact solution is known.
    """

    sigma: float
    rhs_g: Callable[[np.ndarray], np.ndarray]
    include_K: bool = True
    kernel_h: Optional[Kernel] = None
    exact_f: Optional[Callable[[np.ndarray], np.ndarray]] = None
    reference_params: Optional[VPParams] = None
    name: str = ""

    def __post_init__(self):
        if self.exact_f is not None and self.reference_params is not None:
            raise ValueError("give either exact_f or reference_params, not both")


@dataclass
class SolveReport:
    solution: VPFunction
    rhs_coeffs: np.ndarray
    cond_inf: float
    path: SolverPath
    elapsed: float
    residual_inf: float
    matrix: object = field(repr=False, default=None)


def rhs_coeffs(g: Callable[[np.ndarray], np.ndarray], chebgrid: ChebyshevGrid) -> np.ndarray:
    vals = np.asarray(g(chebgrid.nodes), dtype=float)
    vals = np.broadcast_to(vals, chebgrid.nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("right-hand side is not finite at every node")
    return discrete_coeffs(vals, chebgrid)


# --- banded path -----------------------------------------------------------


class OpCounter:
    """Counts multiplications/divisions in the banded elimination."""

    def __init__(self):
        self.mul = 0


def dominance_margins(band: BandMatrix) -> np.ndarray:
    """|M[j,j]| - sum of |off-diagonal| in row j."""
    off = np.zeros(band.n)
    off[:-2] += np.abs(band.upper)
    off[2:] += np.abs(band.lower)
    return np.abs(band.diag) - off


def check_dominance(band: BandMatrix):
    margins = dominance_margins(band)
    if np.any(margins <= 0):
        j = int(np.argmin(margins))
        raise DominanceError(
            f"band matrix is not strictly diagonally dominant (row {j}, margin {margins[j]:.3e}); "
            "use the dense solver"
        )


@dataclass(frozen=True, eq=False)
class BandedLU:
    """L has unit diagonal and multipliers ``v`` at offset -2; U has pivots ``d``
    and the untouched superdiagonal ``alpha_ref`` at offset +2."""

    d: np.ndarray
    v: np.ndarray
    alpha_ref: np.ndarray

    def to_dense(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.d.shape[0]
        L = np.eye(n)
        U = np.diag(self.d)
        if n > 2:
            idx = np.arange(n - 2)
            L[idx + 2, idx] = self.v
            U[idx, idx + 2] = self.alpha_ref
        return L, U


def banded_lu(band: BandMatrix, counter: OpCounter | None = None) -> BandedLU:
    """Pivot-free elimination keeping the 2-bandwidth.

    d_0 = delta_0, d_1 = delta_1, v_{k-2} = gamma_{k-2} / d_{k-2},
    d_k = delta_k - v_{k-2} alpha_k.
    """
    check_dominance(band)
    n = band.n
    up = band.upper.tolist()
    lo = band.lower.tolist()
    d = band.diag.tolist()
    v = [0.0] * max(n - 2, 0)
    ops = 0
    for k in range(2, n):
        vk = lo[k - 2] / d[k - 2]
        v[k - 2] = vk
        d[k] -= vk * up[k - 2]
        ops += 2
    if counter is not None:
        counter.mul += ops
    return BandedLU(d=np.array(d), v=np.array(v), alpha_ref=np.asarray(band.upper, dtype=float).copy())


def lu_solve_banded(lu: BandedLU, rhs, counter: OpCounter | None = None) -> np.ndarray:
    """Forward and back substitution. ``rhs`` may be (n,) or (n, k)."""
    rhs = np.asarray(rhs, dtype=float)
    n = lu.d.shape[0]
    if rhs.ndim == 1:
        d, v, a = lu.d.tolist(), lu.v.tolist(), lu.alpha_ref.tolist()
        x = rhs.tolist()
        ops = 0
        for k in range(2, n):
            x[k] -= v[k - 2] * x[k - 2]
            ops += 1
        for k in range(n - 1, max(n - 3, -1), -1):
            x[k] /= d[k]
            ops += 1
        for k in range(n - 3, -1, -1):
            x[k] = (x[k] - a[k] * x[k + 2]) / d[k]
            ops += 2
        if counter is not None:
            counter.mul += ops
        return np.array(x)
    y = rhs.copy()
    for k in range(2, n):
        y[k] -= lu.v[k - 2] * y[k - 2]
    y[n - 1] /= lu.d[n - 1]
    if n > 1:
        y[n - 2] /= lu.d[n - 2]
    for k in range(n - 3, -1, -1):
        y[k] = (y[k] - lu.alpha_ref[k] * y[k + 2]) / lu.d[k]
    return y


def solve_band_system(band: BandMatrix, rhs, counter: OpCounter | None = None) -> np.ndarray:
    return lu_solve_banded(banded_lu(band, counter), rhs, counter)


def solve_parity_split(band: BandMatrix, rhs) -> np.ndarray:
    """Solve even- and odd-indexed unknowns as two independent tridiagonal systems."""
    rhs = np.asarray(rhs, dtype=float)
    n = band.n
    x = np.empty(n)
    M = band.to_dense()
    for start in (0, 1):
        idx = np.arange(start, n, 2)
        sub = M[np.ix_(idx, idx)]
        ab = np.zeros((3, idx.size))
        ab[1] = np.diag(sub)
        if idx.size > 1:
            ab[0, 1:] = np.diag(sub, 1)
            ab[2, :-1] = np.diag(sub, -1)
        x[idx] = scipy.linalg.solve_banded((1, 1), ab, rhs[idx])
    return x


def solve_banded(coeffs: OperatorCoeffs, rhs, counter: OpCounter | None = None) -> SolveReport:
    """Solve (I + sigma V + A) f~ = g along the banded path."""
    t0 = time.perf_counter()
    band = system_band(coeffs)
    lu = banded_lu(band, counter)
    sol = lu_solve_banded(lu, rhs, counter)
    elapsed = time.perf_counter() - t0
    rhs = np.asarray(rhs, dtype=float)
    return SolveReport(
        solution=VPFunction(coeffs.params, Basis.QTILDE, sol),
        rhs_coeffs=rhs,
        cond_inf=cond_inf_banded(band, lu),
        path=SolverPath.BANDED,
        elapsed=elapsed,
        residual_inf=float(np.max(np.abs(band.matvec(sol) - rhs))) if rhs.size else 0.0,
        matrix=band,
    )


def cond_inf_banded(band: BandMatrix, lu: BandedLU | None = None) -> float:
    if lu is None:
        lu = banded_lu(band)
    inv = lu_solve_banded(lu, np.eye(band.n))
    norm = np.max(np.abs(band.diag) + np.pad(np.abs(band.upper), (0, 2)) + np.pad(np.abs(band.lower), (2, 0)))
    return float(norm * np.max(np.sum(np.abs(inv), axis=1)))


# --- dense path ------------------------------------------------------------


def _lu_dense(M: np.ndarray):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    tol = 1e-14 * np.linalg.norm(M, np.inf)
    if np.min(np.abs(np.diag(lu))) < tol:
        raise NumericalError("matrix is numerically singular")
    return lu, piv


def solve_dense(M: np.ndarray, rhs) -> np.ndarray:
    """Gaussian elimination with partial pivoting."""
    lu_piv = _lu_dense(M)
    return scipy.linalg.lu_solve(lu_piv, np.asarray(rhs, dtype=float), check_finite=False)


def cond_inf(M) -> float:
    """||M||_inf * ||M^{-1}||_inf with the inverse formed explicitly."""
    if isinstance(M, BandMatrix):
        return cond_inf_banded(M)
    M = np.asarray(M, dtype=float)
    lu_piv = _lu_dense(M)
    inv = scipy.linalg.lu_solve(lu_piv, np.eye(M.shape[0]), check_finite=False)
    return float(np.linalg.norm(M, np.inf) * np.linalg.norm(inv, np.inf))


def system_matrix(problem: ProblemSpec, params: VPParams):
    """Band matrix when H is absent, dense ndarray otherwise."""
    band = system_band(operator_coeffs(params, problem.sigma, include_K=problem.include_K))
    if problem.kernel_h is None:
        return band
    return band.to_dense() + assemble_B(params, problem.kernel_h, tables(params))


def solve_system(params: VPParams, sigma: float, g, include_K: bool = True,
                 kernel_h: Optional[Kernel] = None, compute_cond: bool = True,
                 force_dense: bool = False) -> SolveReport:
    """Solve for the q~-coefficients given the q-coefficients ``g`` of V_n^m g.

    Without a kernel the banded path is taken; it refuses (DominanceError) when the
    band matrix is not strictly diagonally dominant. ``force_dense`` selects
    pivoted elimination instead.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (params.n,):
        raise ValueError(f"need {params.n} right-hand side coefficients, got shape {g.shape}")
    coeffs = operator_coeffs(params, sigma, include_K=include_K)
    if kernel_h is None and not force_dense:
        report = solve_banded(coeffs, g)
    else:
        t0 = time.perf_counter()
        M = system_band(coeffs).to_dense()
        if kernel_h is not None:
            M = M + assemble_B(params, kernel_h, tables(params))
        sol = solve_dense(M, g)
        elapsed = time.perf_counter() - t0
        report = SolveReport(
            solution=VPFunction(params, Basis.QTILDE, sol),
            rhs_coeffs=g,
            cond_inf=cond_inf(M) if compute_cond else float("nan"),
            path=SolverPath.DENSE,
            elapsed=elapsed,
            residual_inf=float(np.max(np.abs(M @ sol - g))),
            matrix=M,
        )
    gnorm = float(np.max(np.abs(g)))
    if report.residual_inf > RESIDUAL_RTOL * max(gnorm, np.finfo(float).tiny):
        raise NumericalError(f"residual {report.residual_inf:.3e} exceeds {RESIDUAL_RTOL:g} * ||g||")
    return report


def build_and_solve(problem: ProblemSpec, params: VPParams, compute_cond: bool = True,
                    force_dense: bool = False) -> SolveReport:
    """Assemble, take the banded path iff there is no smooth kernel, solve and self-check.

    ``compute_cond=False`` skips the explicit inverse on the dense path (cond reported as nan).
    """
    g = rhs_coeffs(problem.rhs_g, grid(params.n))
    return solve_system(params, problem.sigma, g, include_K=problem.include_K,
                        kernel_h=problem.kernel_h, compute_cond=compute_cond,
                        force_dense=force_dense)
