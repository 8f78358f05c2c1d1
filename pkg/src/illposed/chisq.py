"""Chi-square statistics: density, p-values, confidence-level thresholds,
and least-squares curvature/covariance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "chi2_pdf",
    "p_value",
    "delta_chi2",
    "CurvatureResult",
    "ls_curvature_covariance",
]


def chi2_pdf(z, n: int):
    """Density of the chi-square distribution with n degrees of freedom."""
    if n < 1:
        raise ValueError("degrees of freedom must be >= 1")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("chi-square variable must be >= 0")
    half = 0.5 * n
    out = np.where(
        z > 0,
        np.exp((half - 1.0) * np.log(np.maximum(z, np.finfo(float).tiny)) - 0.5 * z
               - special.gammaln(half) - half * np.log(2.0)),
        0.5 if n == 2 else (np.inf if n == 1 else 0.0),
    )
    return out if out.ndim else float(out)


def p_value(chi2: float, n: int) -> float:
    """Upper-tail probability P(X >= chi2) for n degrees of freedom."""
    if chi2 < 0:
        raise ValueError("chi2 must be >= 0")
    if n < 1:
        raise ValueError("degrees of freedom must be >= 1")
    return float(special.gammaincc(0.5 * n, 0.5 * chi2))


def delta_chi2(cl_percent: float, n_params: int) -> float:
    """Chi-square increase bounding a joint confidence region.

    Inverts p_value(delta, n_params) = 1 - CL/100 by bisection; reproduces
    the customary table values (e.g. 1.00 / 2.30 / 3.53 at 68.27% for
    1 / 2 / 3 parameters).
    """
    if not (0.0 < cl_percent < 100.0):
        raise ValueError("confidence level must be inside (0, 100)")
    if n_params < 1:
        raise ValueError("parameter count must be >= 1")
    target = 1.0 - cl_percent / 100.0
    lo, hi = 0.0, 1.0
    while p_value(hi, n_params) > target:
        hi *= 2.0
        if hi > 1e8:
            raise RuntimeError("threshold search failed to bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p_value(mid, n_params) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CurvatureResult:
    curvature: np.ndarray  # alpha_jk
    covariance: np.ndarray  # V = alpha^-1
    sigmas: np.ndarray  # sqrt of the diagonal of V


def ls_curvature_covariance(jacobian: np.ndarray, sigma: np.ndarray) -> CurvatureResult:
    """Curvature alpha = J^T diag(1/sigma^2) J and covariance V = alpha^-1.

    `jacobian` holds dF_i/dtheta_j at the optimum, `sigma` the per-point
    measurement errors.  Raises on rank deficiency and names the null
    direction.
    """
    J = np.atleast_2d(np.asarray(jacobian, dtype=float))
    s = np.asarray(sigma, dtype=float)
    if np.any(s <= 0):
        raise ValueError("measurement errors must be positive")
    if J.shape[0] != s.size:
        raise ValueError("jacobian rows must match the data points")
    Jw = J / s[:, None]
    alpha = Jw.T @ Jw
    w_eig, w_vec = np.linalg.eigh(alpha)
    if w_eig[0] <= 1e-13 * max(w_eig[-1], 1.0):
        null = w_vec[:, 0]
        raise np.linalg.LinAlgError(
            f"design is rank deficient along direction {np.array2string(null, precision=4)}"
        )
    V = np.linalg.inv(alpha)
    return CurvatureResult(curvature=alpha, covariance=V, sigmas=np.sqrt(np.diag(V)))
