"""Reconstruction from a single excitation: the interior source term of the
potential equation recovered from one set of boundary currents and voltages.

The boundary data function F(theta) = phi - <phi> - (harmonic part) is
expanded on circle harmonics; dividing by the boundary-map singular values
and truncating at (L, M) gives the regularized interior source Y_reg.  The
potential then follows by one quadrature against the Neumann Green's
function.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..specfun import DiscQuadrature
from .basis import DiscEigenbasis
from .data import ElectrodeDataset, Excitation
from .green import boundary_harmonic, green_neumann_disc

logger = logging.getLogger(__name__)

__all__ = ["HarmonicPart", "harmonic_part", "YField", "single_recon_Y", "single_recon_phi"]


@dataclass(frozen=True)
class HarmonicPart:
    """Coefficients of the harmonic function built from the Neumann data:
    psi(r,theta) = mean_potential + sum_l (1/l) I_l^j r^l u_l^j(theta)."""

    mean_potential: float
    current_coeffs: np.ndarray  # (L_max, 2): I_l^j

    def evaluate(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.full(np.broadcast(r, theta).shape, self.mean_potential)
        for l in range(1, self.current_coeffs.shape[0] + 1):
            rl = r**l / l
            for j in (1, 2):
                c = self.current_coeffs[l - 1, j - 1]
                if c != 0.0:
                    out = out + c * rl * boundary_harmonic(l, j, theta)
        return out


def harmonic_part(dataset: ElectrodeDataset, excitation: Excitation, l_max: int) -> HarmonicPart:
    """Project the injected current on circle harmonics up to l_max.

    l_max is capped below the electrode Nyquist count, where the discrete
    trapezoid projections stay exact.
    """
    cap = dataset.n_electrodes // 2 - 1
    if l_max > cap:
        logger.warning("l_max %d capped at %d by the electrode count", l_max, cap)
        l_max = cap
    coeffs = np.zeros((l_max, 2))
    for l in range(1, l_max + 1):
        for j in (1, 2):
            coeffs[l - 1, j - 1] = dataset.project_boundary(excitation.current, l, j)
    mean_phi = float(excitation.potential.mean())
    return HarmonicPart(mean_potential=mean_phi, current_coeffs=coeffs)


@dataclass(frozen=True)
class YField:
    """Truncated expansion of the interior source on the disc eigenbasis."""

    basis: DiscEigenbasis
    coeffs: np.ndarray  # (L, M, 2) expansion coefficients including signs
    L: int
    M: int

    def evaluate(self, r, theta) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape)
        for l in range(1, self.L + 1):
            for m in range(1, self.M + 1):
                radial = self.basis.radial(l, m, r)
                for j in (1, 2):
                    c = self.coeffs[l - 1, m - 1, j - 1]
                    if c != 0.0:
                        out = out + c * radial * boundary_harmonic(l, j, theta)
        return out


def single_recon_Y(
    dataset: ElectrodeDataset,
    excitation: Excitation,
    basis: DiscEigenbasis,
    L: int = 10,
    M: int = 2,
) -> YField:
    """Truncated-SVD solution of the boundary-data equation.

    Expansion coefficient of mode (l, m, j) is (phi_l^j - I_l^j / l) divided
    by the (signed) singular value of the boundary map.  Defaults L = 10,
    M = 2.
    """
    if L > basis.max_l or M > basis.max_m:
        raise ValueError("truncation exceeds the built basis")
    cap = dataset.n_electrodes // 2 - 1
    if L > cap:
        raise ValueError(f"L = {L} above the electrode Nyquist cap {cap}")
    coeffs = np.zeros((L, M, 2))
    for l in range(1, L + 1):
        for j in (1, 2):
            phi_lj = dataset.project_boundary(excitation.potential, l, j)
            i_lj = dataset.project_boundary(excitation.current, l, j)
            data_comp = phi_lj - i_lj / l
            for m in range(1, M + 1):
                sigma = basis.sing_values[l - 1, m - 1]
                sign = basis.sing_signs[l - 1, m - 1]
                coeffs[l - 1, m - 1, j - 1] = sign * data_comp / sigma
    return YField(basis=basis, coeffs=coeffs, L=L, M=M)


def single_recon_phi(
    y_field: YField,
    psi: HarmonicPart,
    quad: DiscQuadrature,
    r,
    theta,
) -> np.ndarray:
    """Potential reconstruction: psi plus the Green-quadrature image of Y.

    Evaluation points colliding with quadrature points are nudged by half an
    angular cell (with a warning) to step off the logarithmic singularity.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float)).copy()
    theta = np.atleast_1d(np.asarray(theta, dtype=float)).copy()
    y_at_quad = y_field.evaluate(quad.r, quad.theta)

    d2 = (
        r[:, None] ** 2
        + quad.r[None, :] ** 2
        - 2 * r[:, None] * quad.r[None, :] * np.cos(theta[:, None] - quad.theta[None, :])
    )
    clash = np.nonzero(d2.min(axis=1) < 1e-24)[0]
    if clash.size:
        n_theta_cells = np.unique(quad.theta).size
        logger.warning(
            "%d evaluation points coincide with quadrature points; shifting by half a cell",
            clash.size,
        )
        theta[clash] += np.pi / n_theta_cells

    G = green_neumann_disc(
        r[:, None], theta[:, None], quad.r[None, :], quad.theta[None, :]
    )
    correction = G @ (quad.weights * y_at_quad)
    return psi.evaluate(r, theta) + correction
