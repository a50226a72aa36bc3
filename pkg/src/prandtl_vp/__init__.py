"""Collocation-quadrature solver for Prandtl-type hypersingular integro-differential
equations, built on de la Vallee Poussin filtered interpolation at Chebyshev nodes."""

from .chebyshev import ChebyshevGrid, discrete_coeffs, eval_p, grid, quad
from .vp_basis import VPBasisTables, VPParams, eval_phi, eval_q, eval_q_tilde, filter_mu, tables
from .vp_interp import Basis, VPFunction, eval_vp, lebesgue_probe, vp_from_samples
from .operators import (OperatorCoeffs, assemble_A, assemble_B, d_action, k_on_p,
                        operator_coeffs)
from .solver import (NumericalError, DominanceError, ProblemSpec, SolveReport, SolverPath,
                     build_and_solve, cond_inf, rhs_coeffs, solve_banded, solve_dense)
from .benchmarks import ErrorReport, example, run_table, weighted_error

__version__ = "0.1.0"

__all__ = [
    "ChebyshevGrid", "discrete_coeffs", "eval_p", "grid", "quad",
    "VPBasisTables", "VPParams", "eval_phi", "eval_q", "eval_q_tilde", "filter_mu", "tables",
    "Basis", "VPFunction", "eval_vp", "lebesgue_probe", "vp_from_samples",
    "OperatorCoeffs", "assemble_A", "assemble_B", "d_action", "k_on_p", "operator_coeffs",
    "NumericalError", "DominanceError", "ProblemSpec", "SolveReport", "SolverPath",
    "build_and_solve", "cond_inf", "rhs_coeffs", "solve_banded", "solve_dense",
    "ErrorReport", "example", "run_table", "weighted_error",
]
