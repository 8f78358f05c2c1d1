"""Neumann eigenbasis of the unit disc and the boundary-map singular system.

Interior modes are J_l(j*_lm r) times circle harmonics, normalized to unit
disc L2 norm; paired with the circle harmonics they form the singular system
of the boundary restriction of the Neumann Green's function.  The singular
values fall off like 1/j*_lm^2, which is the ill-posedness of recovering an
interior source from one set of boundary data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..specfun import bessel_j, bessel_jprime_zeros
from .green import boundary_harmonic

__all__ = ["DiscEigenbasis", "build_disc_eigenbasis", "disc_eigenfunction"]


@dataclass(frozen=True)
class DiscEigenbasis:
    """Zeros, normalizations, and boundary-map singular values for
    l = 1..max_l, m = 1..max_m.

    `sing_values[l-1, m-1]` stores the magnitude of the boundary-map singular
    value; `sing_signs` carries the sign of J_l at the zero, which alternates
    in m and multiplies the right modes in reconstructions.
    """

    max_l: int
    max_m: int
    zeros: np.ndarray  # (max_l, max_m)
    norms: np.ndarray  # C_lm
    sing_values: np.ndarray  # |sigma_lm| > 0, decreasing in m
    sing_signs: np.ndarray  # sign(J_l(j*_lm))

    def radial(self, l: int, m: int, r):
        return self.norms[l - 1, m - 1] * bessel_j(l, self.zeros[l - 1, m - 1] * np.asarray(r))


def build_disc_eigenbasis(max_l: int, max_m: int) -> DiscEigenbasis:
    if max_l < 1 or max_m < 1:
        raise ValueError("need max_l >= 1 and max_m >= 1")
    zeros = np.empty((max_l, max_m))
    norms = np.empty((max_l, max_m))
    sig = np.empty((max_l, max_m))
    signs = np.empty((max_l, max_m))
    for l in range(1, max_l + 1):
        z = bessel_jprime_zeros(l, max_m).zeros
        zeros[l - 1] = z
        jl = bessel_j(l, z)
        # disc normalization: int_0^1 J_l(j* r)^2 r dr = (1 - l^2/j*^2) J_l(j*)^2 / 2
        norms[l - 1] = np.sqrt(2.0 / (1.0 - l**2 / z**2)) / np.abs(jl)
        lam = z**2
        sig[l - 1] = norms[l - 1] * np.abs(jl) / lam
        signs[l - 1] = np.sign(jl)
    return DiscEigenbasis(
        max_l=max_l, max_m=max_m, zeros=zeros, norms=norms, sing_values=sig, sing_signs=signs
    )


def disc_eigenfunction(basis: DiscEigenbasis, l: int, m: int, j: int, r, theta):
    """Interior mode value C_lm J_l(j*_lm r) u_l^j(theta)."""
    if not (1 <= l <= basis.max_l and 1 <= m <= basis.max_m):
        raise ValueError("mode outside the built basis")
    return basis.radial(l, m, r) * boundary_harmonic(l, j, theta)
