"""Neumann Green's function of the Laplacian on the unit disc."""

from __future__ import annotations

import numpy as np

__all__ = [
    "boundary_harmonic",
    "green_neumann_disc",
    "green_neumann_boundary",
    "green_neumann_boundary_series",
]


def boundary_harmonic(l: int, j: int, theta):
    """Orthonormal circle harmonics: sin(l theta)/sqrt(pi) for j = 1,
    cos(l theta)/sqrt(pi) for j = 2, l >= 1."""
    if l < 1:
        raise ValueError("harmonic index must be >= 1")
    theta = np.asarray(theta, dtype=float)
    if j == 1:
        out = np.sin(l * theta) / np.sqrt(np.pi)
    elif j == 2:
        out = np.cos(l * theta) / np.sqrt(np.pi)
    else:
        raise ValueError("j must be 1 (sine) or 2 (cosine)")
    return out if out.ndim else float(out)


def green_neumann_disc(r, theta, rp, thetap):
    """Closed form on the unit disc:

        -(1/4pi) [ ln(r^2 + r'^2 - 2 r r' cos D) + ln(1 + r^2 r'^2 - 2 r r' cos D) ]

    with D = theta - theta'.  Symmetric, rotation invariant, singular at
    coincident points.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    cosd = np.cos(np.asarray(theta, dtype=float) - np.asarray(thetap, dtype=float))
    d2 = r**2 + rp**2 - 2 * r * rp * cosd
    if np.any(d2 <= 0):
        raise ValueError("coincident evaluation and source points")
    mirror = 1.0 + (r * rp) ** 2 - 2 * r * rp * cosd
    out = -(np.log(d2) + np.log(mirror)) / (4 * np.pi)
    return out if out.ndim else float(out)


def green_neumann_boundary(delta):
    """Both points on the circle: -(1/pi) ln(2 |sin(D/2)|)."""
    delta = np.asarray(delta, dtype=float)
    s = np.abs(2.0 * np.sin(0.5 * delta))
    if np.any(s == 0):
        raise ValueError("coincident boundary points")
    out = -np.log(s) / np.pi
    return out if out.ndim else float(out)


def green_neumann_boundary_series(delta, l_max: int):
    """Truncated eigen-series sum_{l<=L} cos(l D) / (pi l) on the circle."""
    delta = np.asarray(delta, dtype=float)
    l = np.arange(1, l_max + 1)
    out = np.tensordot(np.cos(np.multiply.outer(delta, l)), 1.0 / l, axes=([-1], [0])) / np.pi
    return out if np.ndim(out) else float(out)
