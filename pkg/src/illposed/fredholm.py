"""Fredholm integral equations of the second kind on a quadrature grid.

The unknown u satisfies f(x) = u(x) - lambda * int_a^b K(x,t) u(t) dt.
Four routes are provided: direct Nystrom collocation, degenerate-kernel
reduction to a small linear system, Neumann-series iteration, and the
eigenfunction expansion / resolvent of a symmetric kernel.  They agree on
their joint validity regions and serve as mutual oracles.

First-kind equations are not solved here; their discretizations go through
:mod:`illposed.regcore`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .quadrature import composite_gauss_legendre

logger = logging.getLogger(__name__)

__all__ = [
    "SampledKernel",
    "SymmetricEigensystem",
    "CharacteristicValueError",
    "nystrom_solve",
    "degenerate_solve",
    "neumann_series_solve",
    "symmetric_eigensystem",
    "resolvent_symmetric",
    "symmetric_eigensolution",
]

COND_LIMIT = 1e12


class CharacteristicValueError(RuntimeError):
    """lambda is (numerically) a characteristic value of the kernel."""


@dataclass(frozen=True)
class SampledKernel:
    """Kernel samples K(x_i, t_j) on one quadrature grid for both arguments."""

    values: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        x = np.asarray(self.nodes, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("kernel contains non-finite entries")
        if np.any(w <= 0):
            raise ValueError("quadrature weights must be positive")
        if v.shape != (x.size, x.size):
            raise ValueError("second-kind kernels must be square on the grid")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_function(cls, fn, a: float, b: float, n_panels: int = 8, nodes_per_panel: int = 8):
        x, w = composite_gauss_legendre(a, b, n_panels, nodes_per_panel)
        return cls(values=fn(x[:, None], x[None, :]), nodes=x, weights=w)

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Quadrature approximation of int K(x,t) u(t) dt."""
        return self.values @ (self.weights * u)

    def is_symmetric(self, tol: float = 1e-10) -> bool:
        return bool(np.allclose(self.values, self.values.T, atol=tol * np.abs(self.values).max()))


def nystrom_solve(kernel: SampledKernel, f: np.ndarray, lam: float) -> np.ndarray:
    """Collocation solve of (I - lambda K W) u = f.

    Fails with :class:`CharacteristicValueError` when the system matrix is
    numerically singular, i.e. lambda sits at a characteristic value.
    """
    f = np.asarray(f, dtype=float)
    n = kernel.nodes.size
    M = np.eye(n) - lam * (kernel.values * kernel.weights[None, :])
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise CharacteristicValueError(
            f"lambda = {lam:.6g} is near a characteristic value (cond ~ {cond:.3e})"
        )
    u = np.linalg.solve(M, f)
    residual = np.max(np.abs(u - lam * kernel.apply(u) - f))
    if residual > 1e-10 * max(np.max(np.abs(f)), 1e-300):
        raise CharacteristicValueError(
            f"solve left residual {residual:.3e}; lambda = {lam:.6g} too close to a pole"
        )
    return u


def degenerate_solve(
    a_parts: np.ndarray,
    b_parts: np.ndarray,
    f: np.ndarray,
    lam: float,
    nodes: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Solve with kernel K(x,t) = sum_i a_i(x) b_i(t), sampled part functions.

    Reduces to the p x p system (I - lambda a_mi) c = f_m with
    a_mi = int b_m a_i and f_m = int b_m f, then
    u(x) = f(x) + lambda sum_i c_i a_i(x).
    """
    A = np.atleast_2d(np.asarray(a_parts, dtype=float))
    B = np.atleast_2d(np.asarray(b_parts, dtype=float))
    f = np.asarray(f, dtype=float)
    w = np.asarray(weights, dtype=float)
    p = A.shape[0]
    if B.shape != A.shape or A.shape[1] != w.size:
        raise ValueError("part functions must share the quadrature grid")
    overlap = B @ (w[:, None] * A.T)  # a_mi
    rhs = B @ (w * f)  # f_m
    M = np.eye(p) - lam * overlap
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise CharacteristicValueError(
            f"lambda = {lam:.6g} is a characteristic value of the degenerate kernel"
        )
    c = np.linalg.solve(M, rhs)
    return f + lam * (A.T @ c)


def neumann_series_solve(
    kernel: SampledKernel, f: np.ndarray, lam: float, n_terms: int
) -> tuple[np.ndarray, bool]:
    """Partial sum u_N = f + lambda K W f + (lambda K W)^2 f + ...

    Returns (u_N, converged); convergence is judged by the ratio of successive
    term norms staying below one over the last five terms.  Divergence is a
    reported state, not an error: the series is only valid for small |lambda|.
    """
    if n_terms < 1:
        raise ValueError("need at least one term")
    f = np.asarray(f, dtype=float)
    u = f.copy()
    term = f.copy()
    ratios = []
    prev = np.linalg.norm(term)
    for _ in range(n_terms - 1):
        term = lam * kernel.apply(term)
        u += term
        cur = np.linalg.norm(term)
        if prev > 0:
            ratios.append(cur / prev)
        prev = cur
    tail = ratios[-5:]
    converged = bool(tail and all(r < 1.0 for r in tail))
    if n_terms == 1:
        converged = lam == 0.0
    return u, converged


@dataclass(frozen=True)
class SymmetricEigensystem:
    """Characteristic values and orthonormal eigenfunctions of a symmetric kernel.

    Characteristic values lambda_i are the reciprocals of the operator
    eigenvalues, ordered by increasing magnitude; eigenfunctions are
    orthonormal under the quadrature weights.
    """

    char_values: np.ndarray
    eigenfunctions: np.ndarray  # shape (n_nodes, n_modes)
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.char_values.size

    def project(self, f: np.ndarray) -> np.ndarray:
        return self.eigenfunctions.T @ (self.weights * np.asarray(f, dtype=float))

    def projection_residual(self, f: np.ndarray) -> float:
        """Weighted norm of the part of f outside the stored modes."""
        f = np.asarray(f, dtype=float)
        coeff = self.project(f)
        resid = f - self.eigenfunctions @ coeff
        return float(np.sqrt(np.dot(self.weights, resid**2)))


def symmetric_eigensystem(kernel: SampledKernel, rank_rtol: float = 1e-12) -> SymmetricEigensystem:
    """Eigen-decompose a symmetric sampled kernel under its quadrature.

    Solves the weight-symmetrized problem sqrt(W) K sqrt(W) y = mu y and keeps
    modes with |mu| above `rank_rtol` times the largest.
    """
    if not kernel.is_symmetric():
        raise ValueError("kernel is not symmetric on the grid")
    sw = np.sqrt(kernel.weights)
    S = sw[:, None] * kernel.values * sw[None, :]
    mu, Y = np.linalg.eigh(S)
    order = np.argsort(-np.abs(mu))
    mu, Y = mu[order], Y[:, order]
    keep = np.abs(mu) >= rank_rtol * np.abs(mu[0])
    mu, Y = mu[keep], Y[:, keep]
    phi = Y / sw[:, None]
    char = 1.0 / mu  # |char| increasing because |mu| decreasing
    return SymmetricEigensystem(
        char_values=char, eigenfunctions=phi, nodes=kernel.nodes, weights=kernel.weights
    )


def _check_pole(eigsys: SymmetricEigensystem, lam: float) -> None:
    dist = np.abs(eigsys.char_values - lam)
    tol = 1e-8 * np.abs(eigsys.char_values)
    hit = np.nonzero(dist <= tol)[0]
    if hit.size:
        raise CharacteristicValueError(
            f"lambda = {lam:.8g} is at the characteristic value {eigsys.char_values[hit[0]]:.8g}"
        )


def resolvent_symmetric(
    eigsys: SymmetricEigensystem, base_kernel: SampledKernel, lam: float
) -> SampledKernel:
    """Reciprocal kernel K(x,t) + lambda sum_i phi_i(x) phi_i(t) / (lam_i (lam_i - lam)).

    The solve u = f + lambda * (resolvent) W f then reproduces the Nystrom
    solution whenever the stored modes exhaust the kernel.
    """
    _check_pole(eigsys, lam)
    phi = eigsys.eigenfunctions
    li = eigsys.char_values
    corr = (phi / (li * (li - lam))[None, :]) @ phi.T
    return SampledKernel(
        values=base_kernel.values + lam * corr,
        nodes=base_kernel.nodes,
        weights=base_kernel.weights,
    )


def symmetric_eigensolution(
    eigsys: SymmetricEigensystem, f: np.ndarray, lam: float
) -> np.ndarray:
    """Series solution u = f + lambda sum_i f_i / (lam_i - lam) phi_i.

    Valid when f is expandable in the stored modes; the unexpanded remainder
    is available via :meth:`SymmetricEigensystem.projection_residual` and is
    logged when nonnegligible.
    """
    _check_pole(eigsys, lam)
    f = np.asarray(f, dtype=float)
    coeff = eigsys.project(f)
    resid = eigsys.projection_residual(f)
    scale = float(np.sqrt(np.dot(eigsys.weights, f**2)))
    if scale > 0 and resid > 1e-8 * scale:
        logger.warning("projection residual %.3e of |f| = %.3e left unexpanded", resid, scale)
    u = f + lam * (eigsys.eigenfunctions @ (coeff / (eigsys.char_values - lam)))
    return u
