"""The two quadratic functionals of the constrained fit and the data-side
tolerance that calibrates the Lagrange multiplier."""

from __future__ import annotations

import numpy as np

from .data import SpectralDataset
from .model import ChannelModel, ErrorCorridor, dispersion_kernel, qcd_prediction_tilde_F

__all__ = ["chi_exp2", "chiR2", "chiL2"]


def chi_exp2(covariance: np.ndarray) -> float:
    """Data-compatibility level (1/N) sum_ij sqrt(V_ii V_jj) (V^-1)_ij.

    Equals one for any diagonal covariance; correlations lower or raise it.
    """
    V = np.asarray(covariance, dtype=float)
    n = V.shape[0]
    jitter = 1e-12 * np.trace(V) / n
    Vinv = np.linalg.inv(V + jitter * np.eye(n))
    d = np.sqrt(np.diag(V))
    return float(np.einsum("i,ij,j->", d, Vinv, d) / n)


def chiR2(f: np.ndarray, dataset: SpectralDataset) -> float:
    """Data-side functional: the bin-averaged inverse-covariance quadratic
    form of the deviation from the measured values.

    Normalized per bin, exactly like :func:`chi_exp2`: the canonical
    one-sigma-per-bin displacement gives chiR2 == chi_exp2, which is what
    makes the multiplier calibration meaningful and attainable.
    """
    df = np.asarray(f, dtype=float) - dataset.values
    Vinv = dataset.inverse_covariance()
    return float(df @ Vinv @ df / dataset.n_bins)


def chiL2(
    f: np.ndarray,
    O: np.ndarray,
    model: ChannelModel,
    corridor: ErrorCorridor,
    dataset: SpectralDataset,
) -> float:
    """Theory-side functional on the space-like window:

        (1/|G_L|) int w_L(x) (F~(x; O) - (1/pi) int K(x, x') f(x') dx')^2 dx

    with Gauss-Legendre nodes on the window and bin-trapezoid quadrature on
    the data grid.
    """
    f = np.asarray(f, dtype=float)
    z, omega = corridor.nodes()
    wl = corridor.weight(z, model)
    ftilde = qcd_prediction_tilde_F(z, O, model, s_max=dataset.s_max)
    K = dispersion_kernel(model.channel, z[:, None], dataset.s[None, :])
    disp = K @ (dataset.bin_weights() * f) / np.pi
    mismatch = ftilde - disp
    return float(np.dot(omega, wl * mismatch**2) / corridor.length)
