"""The regularized spectral function at fixed power corrections.

Minimizing (theory functional) + mu * (data functional) over the spectral
function is a linear-quadratic problem.  Two equivalent routes are provided:

- "stacked": the square-root form, one least-squares solve of the corridor
  rows stacked on the whitened data rows.  This is the production path: the
  corridor weight spans many decades on wide windows and the stacked form
  only carries its square root.
- "collocation": the stationarity condition written as a second-kind
  integral equation on the data grid with a once-assembled kernel, solved by
  collocation.  Its conditioning is the square of the stacked form, so it is
  only usable on mild corridors; it cross-validates the stacked path there.

The multiplier is calibrated so the data-side functional equals the
data-compatibility level; when even the full theory pull stays below that
level the constraint is slack and the full pull is used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .. import fredholm
from .chi import chiR2, chi_exp2
from .data import SpectralDataset
from .model import ChannelModel, ErrorCorridor, dispersion_kernel, qcd_prediction_tilde_F

logger = logging.getLogger(__name__)

__all__ = ["ConstraintSystem", "build_system", "solve_regularized_f", "calibrate_mu"]


class BracketingError(RuntimeError):
    """The data-compatibility level is outside the attainable range."""


@dataclass(frozen=True)
class ConstraintSystem:
    """Once-assembled pieces of the regularized solution for one
    (dataset, model, corridor) triple."""

    dataset: SpectralDataset
    model: ChannelModel
    corridor: ErrorCorridor
    window_nodes: np.ndarray
    theory_rows: np.ndarray  # sqrt(omega w_L / |G_L|) K W / pi
    theory_scale: np.ndarray  # sqrt(omega w_L / |G_L|), scales F~ samples
    white: np.ndarray  # V^{-1/2} / sqrt(N)
    kernel: fredholm.SampledKernel  # collocation kernel (alternative route)
    proj: np.ndarray  # collocation inhomogeneity operator
    chi_exp: float

    def tilde_f(self, O: np.ndarray) -> np.ndarray:
        return qcd_prediction_tilde_F(
            self.window_nodes, np.asarray(O, dtype=float), self.model,
            s_max=self.dataset.s_max,
        )

    def inhomogeneity(self, O: np.ndarray) -> np.ndarray:
        return self.proj @ self.tilde_f(O)


def build_system(
    dataset: SpectralDataset, model: ChannelModel, corridor: ErrorCorridor
) -> ConstraintSystem:
    z, omega = corridor.nodes()
    wl = corridor.weight(z, model)
    K = dispersion_kernel(model.channel, z[:, None], dataset.s[None, :])
    w = dataset.bin_weights()
    V = dataset.covariance
    n = dataset.n_bins

    sqw = np.sqrt(omega * wl / corridor.length)
    theory_rows = (sqw[:, None] * K) * w[None, :] / np.pi

    evals, evecs = np.linalg.eigh(V)
    evals = np.maximum(evals, 1e-12 * np.trace(V) / n)
    white = (evecs / np.sqrt(evals)[None, :]) @ evecs.T / np.sqrt(n)

    # collocation form: the data-side functional is bin-averaged, so its
    # stationarity carries the bin count where the continuum form carries
    # the window length
    P = K.T @ ((omega * wl)[:, None] * K)
    c2 = n / (np.pi**2 * corridor.length)
    kernel_values = -c2 * (V @ (w[:, None] * P))
    cb = n / (np.pi * corridor.length)
    proj = cb * (V @ (w[:, None] * (K.T * (omega * wl)[None, :])))
    logger.debug(
        "system scales: N/|G_L| = %.3e, collocation kernel max %.3e, "
        "theory rows max %.3e",
        n / corridor.length, np.abs(kernel_values).max(), np.abs(theory_rows).max(),
    )
    return ConstraintSystem(
        dataset=dataset,
        model=model,
        corridor=corridor,
        window_nodes=z,
        theory_rows=theory_rows,
        theory_scale=sqw,
        white=white,
        kernel=fredholm.SampledKernel(values=kernel_values, nodes=dataset.s, weights=w),
        proj=proj,
        chi_exp=chi_exp2(dataset.covariance),
    )


def solve_regularized_f(
    system: ConstraintSystem, O: np.ndarray, mu: float, method: str = "stacked"
) -> np.ndarray:
    """Spectral function balancing data and theory at multiplier mu > 0.

    Affine in O at fixed mu; nondecreasing data pull as mu decreases.
    """
    if mu <= 0:
        raise ValueError("multiplier must be positive")
    if method == "stacked":
        rt = np.sqrt(mu)
        A = np.vstack([system.theory_rows, rt * system.white])
        y = np.concatenate(
            [system.theory_scale * system.tilde_f(O), rt * system.white @ system.dataset.values]
        )
        f, *_ = np.linalg.lstsq(A, y, rcond=None)
        return f
    if method == "collocation":
        lam = 1.0 / mu
        rhs = system.dataset.values + lam * system.inhomogeneity(O)
        return fredholm.nystrom_solve(system.kernel, rhs, lam)
    raise ValueError(f"unknown method {method!r}")


def calibrate_mu(
    system: ConstraintSystem,
    O: np.ndarray,
    rtol: float = 1e-4,
    strict: bool = True,
) -> float:
    """Multiplier at which the data-side functional equals the
    data-compatibility level, by bisection on the log multiplier.

    The data pull grows as mu decreases.  When even the full theory pull
    leaves the functional below the target the constraint is slack; with
    strict=False the saturating multiplier is returned, otherwise the
    attainable range is reported as an error.
    """
    O = np.asarray(O, dtype=float)
    target = system.chi_exp
    # natural multiplier scale: ratio of the two quadratic forms' weights
    scale = float(np.sum(system.theory_rows**2) / max(np.sum(system.white**2), 1e-300))
    mu_hi = scale * 1e16  # data-dominated end
    mu_lo = scale * 1e-16  # theory-dominated end

    def chi_r(mu: float) -> float:
        return chiR2(solve_regularized_f(system, O, mu), system.dataset)

    chi_weak = chi_r(mu_hi)
    if chi_weak > target:
        raise BracketingError(
            f"data functional at the weak-pull end is {chi_weak:.4g} > target {target:.4g}"
        )
    chi_strong = chi_r(mu_lo)
    if chi_strong < target:
        if strict:
            raise BracketingError(
                f"data functional saturates at {chi_strong:.4g} < target {target:.4g}"
            )
        logger.debug(
            "compatibility constraint slack (%.4g < %.4g); full theory pull",
            chi_strong, target,
        )
        return mu_lo
    a, c = mu_lo, mu_hi  # chi_r decreasing in mu: chi_r(a) >= target >= chi_r(c)
    for _ in range(300):
        mid = np.sqrt(a * c)
        val = chi_r(mid)
        if abs(val - target) <= rtol * target:
            return mid
        if val > target:
            a = mid
        else:
            c = mid
        if c - a <= 1e-14 * c:
            break
    return np.sqrt(a * c)
