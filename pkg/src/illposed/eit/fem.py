"""Linear finite elements for the conductivity equation on the disc.

Assembles a(u, w) = int sigma grad(u) . grad(w) over the triangulation with
sigma averaged over triangle vertices, and solves the Neumann problem with
the boundary current entering through the natural load functional.  The
potential is gauge-fixed to zero arc-weighted boundary mean by a Lagrange
multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .mesh import DiscMesh, MeshError

__all__ = [
    "ConductivityField",
    "CompatibilityError",
    "fem_assemble",
    "fem_forward_solve",
    "boundary_load",
]


class CompatibilityError(ValueError):
    """Boundary current does not conserve charge."""


@dataclass(frozen=True)
class ConductivityField:
    """Strictly positive nodal conductivity on a mesh, background 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise ValueError("conductivity must be strictly positive and finite")
        object.__setattr__(self, "values", v)


def fem_assemble(mesh: DiscMesh, sigma: ConductivityField) -> sparse.csr_matrix:
    """Stiffness matrix of the weak form; symmetric, constants in its kernel."""
    if sigma.values.size != mesh.n_nodes:
        raise ValueError("conductivity must be nodal on the mesh")
    tris = mesh.triangles
    p = mesh.nodes[tris]  # (n_tri, 3, 2)
    areas = mesh.triangle_areas()
    if np.any(areas < 1e-14):
        raise MeshError("degenerate triangle in assembly")
    sig_tri = sigma.values[tris].mean(axis=1)

    # gradients of the barycentric basis: b_k = rot90(edge opposite k) / (2A)
    e0 = p[:, 2] - p[:, 1]
    e1 = p[:, 0] - p[:, 2]
    e2 = p[:, 1] - p[:, 0]
    edges = np.stack([e0, e1, e2], axis=1)  # (n_tri, 3, 2)
    grads = np.stack([-edges[:, :, 1], edges[:, :, 0]], axis=2) / (2 * areas)[:, None, None]

    local = np.einsum("tix,tjx->tij", grads, grads) * (sig_tri * areas)[:, None, None]

    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    A = sparse.coo_matrix(
        (local.ravel(), (rows, cols)), shape=(mesh.n_nodes, mesh.n_nodes)
    ).tocsr()
    return A


def boundary_load(mesh: DiscMesh, current_values: np.ndarray) -> np.ndarray:
    """Load vector of the natural boundary term for a current density given
    at boundary nodes (piecewise linear along the boundary polygon)."""
    I = np.asarray(current_values, dtype=float)
    bnodes = mesh.boundary_nodes
    if I.size != bnodes.size:
        raise ValueError("current must be sampled at the boundary nodes")
    pts = mesh.nodes[bnodes]
    load = np.zeros(mesh.n_nodes)
    n = bnodes.size
    for k in range(n):
        a, b = k, (k + 1) % n
        L = np.linalg.norm(pts[b] - pts[a])
        load[bnodes[a]] += L * (2 * I[a] + I[b]) / 6.0
        load[bnodes[b]] += L * (I[a] + 2 * I[b]) / 6.0
    return load


def fem_forward_solve(
    mesh: DiscMesh,
    sigma: ConductivityField,
    boundary_current: np.ndarray,
    compat_tol: float = 1e-10,
) -> np.ndarray:
    """Nodal potential for a compatible Neumann current, zero boundary mean.

    The singular Neumann system is closed with a Lagrange multiplier on the
    arc-weighted boundary mean; the multiplier doubles as a residual check.
    """
    A = fem_assemble(mesh, sigma)
    load = boundary_load(mesh, boundary_current)
    arc = mesh.boundary_arc_weights()
    total = float(load.sum())
    scale = max(float(np.abs(load).max()), 1e-300)
    if abs(total) > compat_tol * max(1.0, scale * arc.sum()):
        raise CompatibilityError(
            f"net boundary current {total:.3e} violates charge conservation"
        )

    n = mesh.n_nodes
    c = np.zeros(n)
    c[mesh.boundary_nodes] = arc
    K = sparse.bmat([[A, c[:, None]], [c[None, :], None]], format="csc")
    rhs = np.concatenate([load, [0.0]])
    sol = spsolve(K, rhs)
    phi = sol[:-1]
    residual = np.abs(A @ phi + c * sol[-1] - load).max()
    if residual > 1e-8 * max(scale, 1.0):
        raise RuntimeError(f"forward solve residual {residual:.3e}")
    return phi
