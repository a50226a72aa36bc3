"""Spectral actions of the hypersingular and log-kernel operators, and the
matrices of the discrete collocation system."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chebyshev import eval_p_all, grid
from .vp_basis import VPBasisTables, VPParams, tables
from .vp_interp import Basis, VPFunction

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]

BETA0 = 0.25 * (2.0 * math.log(2.0) + 0.5)


def k_on_p(ell: int) -> tuple[float, float, float]:
    """Coefficients of K p_ell on (p_{ell-2}, p_ell, p_{ell+2})."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if ell == 0:
        return 0.0, BETA0, -0.125
    return -1 / (4 * ell), 0.25 * (1 / ell + 1 / (ell + 2)), -1 / (4 * (ell + 2))


@dataclass(frozen=True, eq=False)
class OperatorCoeffs:
    """alpha, beta, gamma of K q~_l = alpha_l p_{l-2} + beta_l p_l + gamma_l p_{l+2}
    at the nodes, plus the banded diagonal delta_j = 1 + sigma w_j + beta_j."""

    params: VPParams
    sigma: float
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray


def operator_coeffs(params: VPParams, sigma: float, include_K: bool = True) -> OperatorCoeffs:
    n, m = params.n, params.m
    alpha = np.zeros(n)
    beta = np.zeros(n)
    gamma = np.zeros(n)
    for l in range(n):
        lo = l <= n - m
        if 2 <= l <= n - m:
            alpha[l] = -1 / (4 * l * (l + 1))
        elif n - m < l < n and l >= 2:
            alpha[l] = -((n + m - l) / (l * (l + 1)) + (l - n + m) / ((2 * n - l + 1) * (2 * n - l + 2))) / (8 * m)

        if l == 0:
            beta[l] = BETA0
        elif l == n - 1:
            # p_{n+1} = -p_{n-1} on the nodes folds into the diagonal (holds for m = 1 too)
            beta[l] = ((m + 1) * (3 * n - 1) / (n * (n * n - 1))
                       + (m - 1) * (3 * n + 7) / ((n + 1) * (n + 2) * (n + 3))) / (8 * m)
        elif lo:
            beta[l] = 1 / (2 * l * (l + 2))
        else:
            beta[l] = ((n + m - l) / (l * (l + 2)) + (l - n + m) / ((2 * n - l) * (2 * n - l + 2))) / (4 * m)

        if l == 0:
            gamma[l] = -0.125
        elif lo and l <= n - 3:
            gamma[l] = -1 / (4 * (l + 1) * (l + 2))
        elif n - m + 1 <= l <= n - 3:
            gamma[l] = -((n + m - l) / ((l + 1) * (l + 2)) + (l - n + m) / ((2 * n - l + 1) * (2 * n - l))) / (8 * m)
    if n < 3:
        gamma[:] = 0.0
    if not include_K:
        alpha[:] = beta[:] = gamma[:] = 0.0
    delta = 1.0 + sigma * tables(params).w + beta
    for arr in (alpha, beta, gamma, delta):
        arr.setflags(write=False)
    return OperatorCoeffs(params=params, sigma=float(sigma), alpha=alpha, beta=beta, gamma=gamma, delta=delta)


@dataclass(frozen=True, eq=False)
class BandMatrix:
    """Square matrix with nonzeros only at offsets -2, 0, +2.

    ``upper[j] = M[j, j+2]``, ``lower[j] = M[j+2, j]`` (both length n-2).
    """

    diag: np.ndarray
    upper: np.ndarray
    lower: np.ndarray

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        n = self.n
        M = np.diag(np.asarray(self.diag, dtype=float))
        if n > 2:
            idx = np.arange(n - 2)
            M[idx, idx + 2] = self.upper
            M[idx + 2, idx] = self.lower
        return M

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        if self.n > 2:
            y[:-2] += self.upper * x[2:]
            y[2:] += self.lower * x[:-2]
        return y

    def __add__(self, other: "BandMatrix") -> "BandMatrix":
        return BandMatrix(self.diag + other.diag, self.upper + other.upper, self.lower + other.lower)


def assemble_A(coeffs: OperatorCoeffs) -> BandMatrix:
    """Matrix of K_n^m from q~ coefficients to q coefficients."""
    n = coeffs.params.n
    upper = coeffs.alpha[2:].copy() if n > 2 else np.zeros(0)
    lower = coeffs.gamma[: n - 2].copy() if n > 2 else np.zeros(0)
    return BandMatrix(diag=coeffs.beta.copy(), upper=upper, lower=lower)


def system_band(coeffs: OperatorCoeffs) -> BandMatrix:
    """I + sigma V + A as a band matrix (the whole system when H is absent)."""
    A = assemble_A(coeffs)
    return BandMatrix(diag=coeffs.delta.copy(), upper=A.upper, lower=A.lower)


def kernel_matrix(params: VPParams, h: Kernel) -> np.ndarray:
    """H[i, j] = h(x_j, x_i): row index runs over the outer variable y."""
    x = grid(params.n).nodes
    Y, X = np.meshgrid(x, x, indexing="ij")
    Hm = np.asarray(h(X, Y), dtype=float)
    if Hm.shape != (params.n, params.n):
        Hm = np.broadcast_to(Hm, (params.n, params.n)).astype(float)
    if not np.all(np.isfinite(Hm)):
        raise ValueError("kernel h is not finite at every pair of nodes")
    return Hm


def assemble_B(params: VPParams, h: Kernel, tabs: VPBasisTables | None = None) -> np.ndarray:
    """Matrix of H_n^m from q~ coefficients to q coefficients:
    (1/pi) (P Lambda) H (P Lambda)^T diag(Q)."""
    if tabs is None:
        tabs = tables(params)
    g = grid(params.n)
    PL = eval_p_all(params.n - 1, g.nodes).T * g.weights  # PL[i, k] = p_i(x_k) lambda_k
    Hm = kernel_matrix(params, h)
    return (PL @ Hm @ PL.T) * tabs.Q / np.pi


def d_action(fn: VPFunction) -> VPFunction:
    """D maps q~_j to q_j, so the coefficients carry over unchanged."""
    if fn.basis is not Basis.QTILDE:
        raise ValueError("d_action expects a function in the QTILDE basis")
    return VPFunction(fn.params, Basis.Q, fn.coeffs.copy())
