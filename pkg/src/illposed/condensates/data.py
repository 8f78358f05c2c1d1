"""Spectral-function datasets and the normalization from raw mass spectra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..quadrature import trapezoid_weights

__all__ = [
    "SpectralDataset",
    "spectral_normalization",
    "M_TAU",
    "S_EW",
    "V_UD",
    "B_E",
]

M_TAU = 1.777  # GeV
S_EW = 1.0198  # short-distance electroweak correction
V_UD = 0.9746  # CKM matrix element
B_E = 0.17810  # electronic branching fraction


@dataclass
class SpectralDataset:
    """Binned spectral-function values with their covariance.

    s: bin centers (GeV^2), strictly increasing, all positive.
    values: measured spectral function on those bins.
    covariance: symmetric positive-semidefinite matrix.
    """

    s: np.ndarray
    values: np.ndarray
    covariance: np.ndarray
    _inv_cache: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.covariance = np.asarray(self.covariance, dtype=float)
        n = self.s.size
        if self.s[0] <= 0 or np.any(np.diff(self.s) <= 0):
            raise ValueError("bins must be positive and strictly increasing")
        if self.values.shape != (n,) or self.covariance.shape != (n, n):
            raise ValueError("values/covariance do not match the grid")
        V = self.covariance
        if not np.allclose(V, V.T, atol=1e-12 * max(np.abs(V).max(), 1e-300)):
            raise ValueError("covariance must be symmetric")
        eigs = np.linalg.eigvalsh(V)
        if eigs[0] < -1e-10 * max(np.trace(V), 1e-300):
            raise ValueError("covariance has significantly negative eigenvalues")

    @property
    def n_bins(self) -> int:
        return self.s.size

    @property
    def s_min(self) -> float:
        return float(self.s[0])

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    @property
    def window_length(self) -> float:
        return self.s_max - self.s_min

    def bin_weights(self) -> np.ndarray:
        return trapezoid_weights(self.s)

    def inverse_covariance(self) -> np.ndarray:
        """Inverse of the covariance after a trace-scaled diagonal jitter."""
        if self._inv_cache is None:
            V = self.covariance
            jitter = 1e-12 * np.trace(V) / self.n_bins
            try:
                self._inv_cache = np.linalg.inv(V + jitter * np.eye(self.n_bins))
            except np.linalg.LinAlgError as exc:
                raise ValueError("covariance is singular even after jitter") from exc
        return self._inv_cache

    def truncated(self, n_bins: int) -> "SpectralDataset":
        """Dataset restricted to the first n_bins bins."""
        if not 2 <= n_bins <= self.n_bins:
            raise ValueError("invalid bin count")
        return SpectralDataset(
            s=self.s[:n_bins].copy(),
            values=self.values[:n_bins].copy(),
            covariance=self.covariance[:n_bins, :n_bins].copy(),
        )


def spectral_normalization(
    s,
    dr_ds,
    s_ew: float = S_EW,
    v_ud: float = V_UD,
    b_e: float = B_E,
    m_tau: float = M_TAU,
):
    """Spectral function from a normalized invariant-mass-squared spectrum.

    Divides out the phase-space factor (1 - s/m^2)^2 (1 + 2s/m^2) and applies
    the m^2 / (6 |V_ud|^2 S_EW B_e) normalization.  Valid below the kinematic
    endpoint s = m_tau^2.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s >= m_tau**2) or np.any(s <= 0):
        raise ValueError("bins must satisfy 0 < s < m_tau^2")
    x = s / m_tau**2
    kin = (1.0 - x) ** 2 * (1.0 + 2.0 * x)
    pref = m_tau**2 / (6.0 * v_ud**2 * s_ew * b_e)
    out = pref * np.asarray(dr_ds, dtype=float) / kin
    return out if out.ndim else float(out)
