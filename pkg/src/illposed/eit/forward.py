"""Forward data generation: FEM-solve trigonometric current patterns and
sample the boundary response at point electrodes."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .data import ElectrodeDataset, Excitation
from .fem import ConductivityField, fem_forward_solve
from .mesh import DiscMesh, disc_mesh

__all__ = ["default_forward_mesh", "trig_patterns", "solve_forward_dataset", "add_noise"]


def default_forward_mesh(n_electrodes: int = 32, refine: int = 1) -> DiscMesh:
    """Forward mesh whose boundary nodes contain the electrode angles."""
    n_theta = 3 * n_electrodes * refine
    n_r = max(2, int(round(n_theta / 3.7)))
    return disc_mesh(n_r, n_theta)


def trig_patterns(max_order: int, kinds: Sequence[str] = ("sin", "cos")) -> list[tuple[str, int]]:
    """The excitation schedule sin(m theta), cos(m theta), m = 1..max_order."""
    return [(kind, m) for m in range(1, max_order + 1) for kind in kinds]


def solve_forward_dataset(
    sigma_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    n_electrodes: int = 32,
    max_order: int = 10,
    kinds: Sequence[str] = ("sin", "cos"),
    mesh: DiscMesh | None = None,
) -> ElectrodeDataset:
    """FEM-solve all requested patterns on sigma and sample at electrodes.

    The mesh's angular count must be a multiple of the electrode count so
    electrodes land on boundary nodes.
    """
    if mesh is None:
        mesh = default_forward_mesh(n_electrodes)
    bnodes = mesh.boundary_nodes
    if bnodes.size % n_electrodes != 0:
        raise ValueError("electrode count must divide the boundary node count")
    stride = bnodes.size // n_electrodes
    enodes = bnodes[::stride]
    eangles = np.mod(np.arctan2(mesh.nodes[enodes, 1], mesh.nodes[enodes, 0]), 2 * np.pi)

    sigma = ConductivityField(sigma_fn(mesh.nodes[:, 0], mesh.nodes[:, 1]))
    btheta = np.mod(np.arctan2(mesh.nodes[bnodes, 1], mesh.nodes[bnodes, 0]), 2 * np.pi)

    excitations = []
    for kind, m in trig_patterns(max_order, kinds):
        dens = np.sin(m * btheta) if kind == "sin" else np.cos(m * btheta)
        phi = fem_forward_solve(mesh, sigma, dens)
        pot = phi[enodes]
        pot = pot - pot.mean()
        cur = np.sin(m * eangles) if kind == "sin" else np.cos(m * eangles)
        excitations.append(Excitation(current=cur, potential=pot))
    ds = ElectrodeDataset(electrode_angles=eangles, excitations=excitations)
    ds.validate(tol=1e-8)
    return ds


def add_noise(
    dataset: ElectrodeDataset, level: float, rng: np.random.Generator
) -> ElectrodeDataset:
    """Perturb potentials with Gaussian noise scaled to each excitation's RMS."""
    if level < 0:
        raise ValueError("noise level must be >= 0")
    out = []
    for exc in dataset.excitations:
        scale = level * float(np.sqrt(np.mean(exc.potential**2)))
        pot = exc.potential + rng.normal(0.0, 1.0, exc.potential.size) * scale
        pot = pot - pot.mean()
        out.append(Excitation(current=exc.current.copy(), potential=pot))
    return ElectrodeDataset(electrode_angles=dataset.electrode_angles.copy(), excitations=out)
