"""Second-kind Chebyshev polynomials, Gauss-Chebyshev nodes and quadrature.

The polynomials are orthonormal with respect to ``phi(x) = sqrt(1 - x**2)``::

    p_j(cos t) = sqrt(2/pi) * sin((j+1) t) / sin(t)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)

# |x| may exceed 1 by this much (rounding in callers) before it is a domain error.
DOMAIN_SLACK = 1e-14
# Inside 1 - |x| < ENDPOINT_BAND the angle is taken from the half-angle formula.
ENDPOINT_BAND = 1e-8


def _as_interval(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + DOMAIN_SLACK):
        raise ValueError("x must lie in [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def _angle(ax: np.ndarray) -> np.ndarray:
    """arccos(ax) for ax in [0, 1], exact-ish near ax = 1."""
    t = np.arccos(ax)
    band = (1.0 - ax) < ENDPOINT_BAND
    if np.any(band):
        # 1 - ax is exact there, so the half-angle form keeps full relative accuracy
        t = np.where(band, 2.0 * np.arcsin(np.sqrt((1.0 - ax) / 2.0)), t)
    return t


def eval_p_all(jmax: int, x) -> np.ndarray:
    """Values of ``p_0 .. p_jmax`` at the points ``x``.

    Returns an array of shape ``x.shape + (jmax + 1,)``.
    """
    if jmax < 0:
        raise ValueError("jmax must be >= 0")
    x = _as_interval(x)
    ax = np.abs(x)
    t = _angle(ax)[..., None]
    j1 = np.arange(1, jmax + 2, dtype=float)
    st = np.sin(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.sin(j1 * t) / st
    # t == 0 exactly: limit value j + 1
    u = np.where(st == 0.0, j1, u)
    # p_j(-x) = (-1)^j p_j(x)
    sign = np.where(x[..., None] < 0, np.where(np.arange(jmax + 1) % 2 == 1, -1.0, 1.0), 1.0)
    return SQRT_2_OVER_PI * sign * u


def eval_p(j: int, x):
    """Evaluate ``p_j`` at ``x`` (scalar or array)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    x = np.asarray(x, dtype=float)
    x1 = _as_interval(x)
    ax = np.abs(x1)
    t = _angle(ax)
    st = np.sin(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.sin((j + 1) * t) / st
    u = np.where(st == 0.0, float(j + 1), u)
    if j % 2 == 1:
        u = np.where(x1 < 0, -u, u)
    out = SQRT_2_OVER_PI * u
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class ChebyshevGrid:
    """Zeros of ``p_n`` (decreasing) and the matching Christoffel numbers."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def angles(self) -> np.ndarray:
        return np.arange(1, self.n + 1) * np.pi / (self.n + 1)


@lru_cache(maxsize=64)
def grid(n: int) -> ChebyshevGrid:
    if n < 1:
        raise ValueError("n must be >= 1")
    t = np.arange(1, n + 1) * np.pi / (n + 1)
    nodes = np.cos(t)
    # cos is not exactly odd-symmetric in floating point around pi/2
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = np.pi / (n + 1) * np.sin(t) ** 2
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return ChebyshevGrid(n=n, nodes=nodes, weights=weights)


def _check_len(samples, g: ChebyshevGrid) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != g.n:
        raise ValueError(f"expected {g.n} samples, got {samples.shape[0]}")
    return samples


def quad(samples, g: ChebyshevGrid) -> float:
    """Gauss-Chebyshev rule: approximates the integral of ``f * phi`` over [-1, 1]."""
    samples = _check_len(samples, g)
    return float(g.weights @ samples)


@lru_cache(maxsize=32)
def _analysis_matrix(n: int) -> np.ndarray:
    g = grid(n)
    # row j: lambda_k p_j(x_k)
    mat = (eval_p_all(n - 1, g.nodes) * g.weights[:, None]).T.copy()
    mat.setflags(write=False)
    return mat


def discrete_coeffs(samples, g: ChebyshevGrid) -> np.ndarray:
    """Discrete Fourier-Chebyshev coefficients ``c_j = sum_k lambda_k p_j(x_k) f(x_k)``.

    ``samples`` may be 2-D; columns are transformed independently.
    """
    samples = _check_len(samples, g)
    return _analysis_matrix(g.n) @ samples
