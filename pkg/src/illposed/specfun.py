"""Bessel functions of the first kind, zeros of their derivatives, and
quadrature on the unit disc.

These are the special-function ingredients of the Neumann eigenbasis on the
disc: radial modes are J_l(j*_lm r) where j*_lm are the positive zeros of
J_l', and mode normalization integrals are evaluated with the product rule
returned by :func:`disc_quadrature`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .quadrature import gauss_legendre

__all__ = [
    "bessel_j",
    "bessel_jprime",
    "bessel_jprime_zeros",
    "BesselDerivativeZeros",
    "DiscQuadrature",
    "disc_quadrature",
]


def bessel_j(l: int, x):
    """Bessel function of the first kind J_l, integer order l >= 0.

    Accurate to ~1e-15 absolute for the real arguments used here (x <= 200).
    """
    if l < 0:
        raise ValueError("order must be nonnegative")
    return special.jv(l, x)


def bessel_jprime(l: int, x):
    """dJ_l/dx via the derivative identity (J_{l-1} - J_{l+1})/2.

    For l = 0 uses J_0' = -J_1.
    """
    if l == 0:
        return -special.jv(1, x)
    return 0.5 * (special.jv(l - 1, x) - special.jv(l + 1, x))


@dataclass(frozen=True)
class BesselDerivativeZeros:
    """First zeros of J_l' for one order l, increasing in m."""

    order: int
    zeros: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.zeros, dtype=float)
        if z.ndim != 1 or np.any(np.diff(z) <= 0) or np.any(z <= 0):
            raise ValueError("zeros must be positive and strictly increasing")
        object.__setattr__(self, "zeros", z)


@lru_cache(maxsize=64)
def _zeros_cached(l: int, m_max: int) -> BesselDerivativeZeros:
    # Zeros of J_l' are spaced ~pi apart for large m; scan with a step well
    # below pi so no sign change is skipped, then bisect each bracket.
    step = 0.25
    lo = 1e-6
    found = []
    upper = l + (m_max + 4) * np.pi + 10.0
    grid = np.arange(lo, upper, step)
    vals = bessel_jprime(l, grid)
    sign = np.sign(vals)
    for k in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        a, b = grid[k], grid[k + 1]
        fa = vals[k]
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = bessel_jprime(l, mid)
            if fa * fm <= 0:
                b = mid
            else:
                a, fa = mid, fm
            if b - a < 1e-14 * max(1.0, b):
                break
        found.append(0.5 * (a + b))
        if len(found) == m_max:
            break
    if len(found) < m_max:
        raise RuntimeError(f"found only {len(found)} zeros of J_{l}' below {upper}")
    return BesselDerivativeZeros(order=l, zeros=np.array(found))


def bessel_jprime_zeros(l: int, m_max: int) -> BesselDerivativeZeros:
    """First `m_max` positive zeros j*_{l,m} of J_l', bracketed by sign change
    and refined by bisection to ~1e-10.

    Restricted to l >= 1: the l = 0 branch starts with the trivial stationary
    point at the origin and is excluded from the disc eigenbasis.
    """
    if l < 1:
        raise ValueError("order must be >= 1")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    return _zeros_cached(int(l), int(m_max))


@dataclass(frozen=True)
class DiscQuadrature:
    """Product quadrature {w_k; r_k, theta_k} on the unit disc.

    Weights carry the area element r dr dtheta, so sum(w) == pi.
    """

    r: np.ndarray
    theta: np.ndarray
    weights: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return self.r * np.cos(self.theta)

    @property
    def y(self) -> np.ndarray:
        return self.r * np.sin(self.theta)

    def __len__(self) -> int:
        return self.weights.size


def disc_quadrature(n_r: int, n_theta: int) -> DiscQuadrature:
    """Gauss-Legendre in radius (Jacobian r absorbed) x trapezoid in angle.

    Exact for integrands r^a cos(b theta) with a <= 2 n_r - 2 and
    b <= n_theta - 1.
    """
    if n_r < 1 or n_theta < 1:
        raise ValueError("n_r and n_theta must be >= 1")
    r_nodes, r_w = gauss_legendre(0.0, 1.0, n_r)
    theta_nodes = 2.0 * np.pi * np.arange(n_theta) / n_theta
    theta_w = 2.0 * np.pi / n_theta
    r = np.repeat(r_nodes, n_theta)
    theta = np.tile(theta_nodes, n_r)
    w = np.repeat(r_w * r_nodes, n_theta) * theta_w
    return DiscQuadrature(r=r, theta=theta, weights=w)
