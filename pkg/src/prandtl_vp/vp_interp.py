"""VP filtered interpolation V_n^m on Chebyshev nodes of the second kind."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .chebyshev import discrete_coeffs, eval_p_all, grid
from .vp_basis import VPParams, q_matrix

DEFAULT_MESH_SIZE = 1001


class Basis(enum.Enum):
    Q = "q"
    QTILDE = "qtilde"


@dataclass(frozen=True, eq=False)
class VPFunction:
    """Element of S_n^m (basis Q) or of the modified space (basis QTILDE)."""

    params: VPParams
    basis: Basis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.params.n,):
            raise ValueError(f"need {self.params.n} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        return eval_vp(self, x)

    def node_values(self) -> np.ndarray:
        return eval_vp(self, grid(self.params.n).nodes)


def vp_from_samples(params: VPParams, samples) -> VPFunction:
    """V_n^m f from the values of f on the nodes of ``grid(params.n)``."""
    c = discrete_coeffs(samples, grid(params.n))
    return VPFunction(params, Basis.Q, c)


def eval_vp(fn: VPFunction, x):
    x = np.asarray(x, dtype=float)
    vals = q_matrix(fn.params, x, tilde=fn.basis is Basis.QTILDE) @ fn.coeffs
    return float(vals) if vals.ndim == 0 else vals


def phi_kernel_matrix(params: VPParams, x) -> np.ndarray:
    """Phi_{n,k}^m(x) for all k, through the q-basis change of basis.

    Shape ``x.shape + (n,)``. Used to cross-check the coefficient route.
    """
    n = params.n
    g = grid(n)
    # Phi_k(x) = lambda_k sum_j p_j(x_k) q_j(x)
    Pk = eval_p_all(n - 1, g.nodes)  # (k, j)
    return (q_matrix(params, x) @ Pk.T) * g.weights


def eval_vp_kernel(params: VPParams, samples, x):
    """V_n^m f(x) = sum_k f(x_k) Phi_k(x)."""
    return phi_kernel_matrix(params, x) @ np.asarray(samples, dtype=float)


def lebesgue_probe(params: VPParams, mesh=None) -> float:
    """max over the mesh of phi(x) * sum_k |Phi_k(x)| / phi(x_k)."""
    if mesh is None:
        mesh = np.linspace(-1.0, 1.0, DEFAULT_MESH_SIZE)
    mesh = np.asarray(mesh, dtype=float).ravel()
    if mesh.size == 0:
        raise ValueError("empty mesh")
    g = grid(params.n)
    phi_nodes = np.sqrt(1.0 - g.nodes**2)
    phi_x = np.sqrt(np.clip(1.0 - mesh**2, 0.0, None))
    vals = phi_x * (np.abs(phi_kernel_matrix(params, mesh)) @ (1.0 / phi_nodes))
    return float(vals.max())
