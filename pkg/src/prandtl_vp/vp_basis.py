"""De la Vallee Poussin filter, fundamental VP polynomials and the q / q~ bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chebyshev import _as_interval, eval_p, eval_p_all, grid

# Trig form of Phi has 0/0 points at t = +-t_k and sin t = 0.
PHI_ANGLE_GUARD = 1e-6
PHI_SIN_GUARD = 1e-8


@dataclass(frozen=True)
class VPParams:
    """Grid size ``n`` and filter half-width ``m``, with ``0 < m < n``."""

    n: int
    m: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and isinstance(self.m, (int, np.integer))):
            raise TypeError("n and m must be integers")
        if not 0 < self.m < self.n:
            raise ValueError(f"need 0 < m < n, got n={self.n}, m={self.m}")

    @property
    def theta(self) -> Fraction:
        return Fraction(self.m, self.n)

    @classmethod
    def from_N(cls, N: int) -> "VPParams":
        """Filter acting from degree N to 2N-1: ``m = N/2``, ``n = 3N/2`` (theta = 1/3)."""
        if N < 2 or N % 2:
            raise ValueError("N must be a positive even integer")
        return cls(n=3 * N // 2, m=N // 2)

    @classmethod
    def from_n(cls, n: int, theta: float = 1 / 3) -> "VPParams":
        """Fixed localization ratio: ``m = max(1, round(theta * n))``."""
        return cls(n=n, m=max(1, int(round(theta * n))))


def filter_mu(params: VPParams, j: int) -> float:
    n, m = params.n, params.m
    if not 0 <= j <= n + m - 1:
        raise IndexError(f"filter index {j} outside [0, {n + m - 1}]")
    if j <= n - m:
        return 1.0
    return (n + m - j) / (2 * m)


def _blend(params: VPParams) -> tuple[np.ndarray, np.ndarray]:
    """Weights a_j, b_j with q_j = a_j p_j - b_j p_{2n-j} (b_j = 0 for j <= n-m)."""
    n, m = params.n, params.m
    j = np.arange(n)
    a = np.where(j <= n - m, 1.0, (m + n - j) / (2 * m))
    b = np.where(j <= n - m, 0.0, (m - n + j) / (2 * m))
    return a, b


def eval_phi_spectral(params: VPParams, k: int, x) -> np.ndarray:
    """Phi_{n,k}^m(x) as the filtered Darboux sum."""
    n, m = params.n, params.m
    if not 1 <= k <= n:
        raise IndexError(f"node index {k} outside [1, {n}]")
    g = grid(n)
    mu = np.array([filter_mu(params, j) for j in range(n + m)])
    pk = eval_p_all(n + m - 1, g.nodes[k - 1])
    return g.weights[k - 1] * (eval_p_all(n + m - 1, x) @ (mu * pk))


def eval_phi(params: VPParams, k: int, x):
    """Fundamental VP polynomial Phi_{n,k}^m at ``x``.

    Uses the closed trigonometric form; points where that form degenerates
    are delegated to :func:`eval_phi_spectral`.
    """
    n, m = params.n, params.m
    if not 1 <= k <= n:
        raise IndexError(f"node index {k} outside [1, {n}]")
    xa = _as_interval(x)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    t = np.arccos(xa)
    tk = k * np.pi / (n + 1)
    bad = (np.abs(t - tk) < PHI_ANGLE_GUARD) | (np.abs(t + tk) < PHI_ANGLE_GUARD) | (np.abs(np.sin(t)) < PHI_SIN_GUARD)
    out = np.empty_like(xa)
    good = ~bad
    if np.any(good):
        tg = t[good]
        s1 = np.sin(m * (tg - tk)) / np.sin((tg - tk) / 2) ** 2
        s2 = np.sin(m * (tg + tk)) / np.sin((tg + tk) / 2) ** 2
        pref = (-1) ** k * np.sin(tk) / (4 * m * (n + 1))
        out[good] = pref * np.sin((n + 1) * tg) / np.sin(tg) * (s1 - s2)
    if np.any(bad):
        out[bad] = eval_phi_spectral(params, k, xa[bad])
    return float(out[0]) if scalar else out


def q_matrix(params: VPParams, x, tilde: bool = False) -> np.ndarray:
    """Columns q_0 .. q_{n-1} (or q~_j) evaluated at the points ``x``."""
    n, m = params.n, params.m
    P = eval_p_all(n + m - 1, x)
    a, b = _blend(params)
    j = np.arange(n)
    if tilde:
        a = a / (j + 1)
        b = b / (2 * n - j + 1)
    out = P[..., :n] * a
    hi = np.arange(n - m + 1, n)
    if hi.size:
        out[..., hi] -= P[..., 2 * n - hi] * b[hi]
    return out


def _check_j(params: VPParams, j: int):
    if not 0 <= j <= params.n - 1:
        raise IndexError(f"basis index {j} outside [0, {params.n - 1}]")


def eval_q(params: VPParams, j: int, x):
    _check_j(params, j)
    n, m = params.n, params.m
    if j <= n - m:
        return eval_p(j, x)
    return (m + n - j) / (2 * m) * eval_p(j, x) - (m - n + j) / (2 * m) * eval_p(2 * n - j, x)


def eval_q_tilde(params: VPParams, j: int, x):
    _check_j(params, j)
    n, m = params.n, params.m
    if j <= n - m:
        return eval_p(j, x) / (j + 1)
    return ((m + n - j) / (2 * m) * eval_p(j, x) / (j + 1)
            - (m - n + j) / (2 * m) * eval_p(2 * n - j, x) / (2 * n - j + 1))


@dataclass(frozen=True, eq=False)
class VPBasisTables:
    """Per-(n, m) scalars used by the system matrices.

    mu : filter coefficients, length n+m
    w  : diagonal of the matrix representing V_n^m from the q~ to the q basis
    Q  : <q_j, q~_j>
    qq : <q_j, q_j>
    """

    params: VPParams
    mu: np.ndarray
    w: np.ndarray
    Q: np.ndarray
    qq: np.ndarray


@lru_cache(maxsize=64)
def tables(params: VPParams) -> VPBasisTables:
    n, m = params.n, params.m
    mu = np.array([filter_mu(params, j) for j in range(n + m)])
    j = np.arange(n, dtype=float)
    lo = j <= n - m
    w = np.where(lo, 1 / (j + 1), ((m + n - j) / (j + 1) + (j - n + m) / (2 * n - j + 1)) / (2 * m))
    Q = np.where(lo, 1 / (j + 1),
                 (m + n - j) ** 2 / (4 * m**2 * (j + 1)) + (m - n + j) ** 2 / (4 * m**2 * (2 * n - j + 1)))
    qq = np.where(lo, 1.0, (m**2 + (n - j) ** 2) / (2 * m**2))
    for arr in (mu, w, Q, qq):
        arr.setflags(write=False)
    return VPBasisTables(params=params, mu=mu, w=w, Q=Q, qq=qq)
