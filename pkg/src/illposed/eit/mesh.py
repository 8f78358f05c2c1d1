"""Structured triangulation of the unit disc.

Concentric-ring meshes: nodes on rings r_i = i/n_r with a fixed angular
count, quads split into triangles, and a fan around the center node.  The
construction is deterministic, so refinement studies and electrode layouts
are reproducible without an external mesher.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DiscMesh", "disc_mesh", "MeshError"]


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class DiscMesh:
    """Triangulated unit disc: node coordinates, triangle index triples, and
    the boundary loop ordered by angle."""

    nodes: np.ndarray  # (n_nodes, 2)
    triangles: np.ndarray  # (n_tri, 3) int
    boundary_nodes: np.ndarray  # indices, ordered by angle

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def boundary_arc_weights(self) -> np.ndarray:
        """Arc-length weight of each boundary node (half of both edges)."""
        pts = self.nodes[self.boundary_nodes]
        nxt = np.roll(pts, -1, axis=0)
        edge = np.linalg.norm(nxt - pts, axis=1)
        return 0.5 * (edge + np.roll(edge, 1))

    def validate(self) -> None:
        r = np.linalg.norm(self.nodes, axis=1)
        if np.any(r > 1.0 + 1e-12):
            raise MeshError("node outside the unit disc")
        areas = self.triangle_areas()
        if np.any(areas < 1e-14):
            raise MeshError("degenerate or negatively oriented triangle")
        # boundary forms a single closed loop ordered by angle
        ang = np.arctan2(*self.nodes[self.boundary_nodes][:, ::-1].T)
        ang = np.mod(ang, 2 * np.pi)
        if np.any(np.diff(ang) <= 0):
            raise MeshError("boundary nodes not ordered by angle")


def disc_mesh(n_r: int, n_theta: int) -> DiscMesh:
    """Ring mesh with n_r radial layers and n_theta sectors.

    Yields n_theta * (2 n_r - 1) positively oriented triangles; boundary
    nodes sit exactly on the unit circle at uniform angles, so electrode
    counts dividing n_theta land on mesh nodes.
    """
    if n_r < 1 or n_theta < 3:
        raise MeshError("need n_r >= 1 and n_theta >= 3")
    nodes = [(0.0, 0.0)]
    for i in range(1, n_r + 1):
        r = i / n_r
        for j in range(n_theta):
            th = 2 * np.pi * j / n_theta
            nodes.append((r * np.cos(th), r * np.sin(th)))
    nodes = np.array(nodes)

    def idx(i, j):  # ring i >= 1
        return 1 + (i - 1) * n_theta + (j % n_theta)

    tris = []
    for j in range(n_theta):
        tris.append((0, idx(1, j), idx(1, j + 1)))
    for i in range(1, n_r):
        for j in range(n_theta):
            a, b = idx(i, j), idx(i, j + 1)
            c, d = idx(i + 1, j), idx(i + 1, j + 1)
            tris.append((a, c, d))
            tris.append((a, d, b))
    boundary = np.array([idx(n_r, j) for j in range(n_theta)])
    mesh = DiscMesh(nodes=nodes, triangles=np.array(tris, dtype=int), boundary_nodes=boundary)
    mesh.validate()
    return mesh
