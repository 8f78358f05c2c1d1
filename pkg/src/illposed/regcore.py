"""SVD machinery for linear ill-posed problems.

Operators are sampled kernels on explicit quadrature grids: the singular
system of the integral operator is the SVD of the weight-scaled sample
matrix, with modes rescaled back to function samples so that they are
orthonormal under the grid inner products.

The solvers (generalized inverse, Tikhonov, truncated SVD, spectral windows)
all act by filtering singular components; parameter-choice rules (prescribed
discrepancy, prescribed energy, Miller, L-curve) operate on the resulting
one-parameter families.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    "SvdSystem",
    "RegularizedSolution",
    "SpectralWindow",
    "NoiseModel",
    "PicardDiagnostics",
    "svd_of_kernel",
    "generalized_solve",
    "picard_diagnostics",
    "tikhonov_solve",
    "tikhonov_direct_solve",
    "tsvd_solve",
    "spectral_window_solve",
    "tikhonov_window",
    "step_window",
    "choose_lambda",
    "lambda_sweep",
]

#: relative floor below which singular values count as numerically zero
ZERO_MODE_RTOL = 1e-12


class ParameterError(ValueError):
    """Invalid regularization parameter or window."""


class RangeError(RuntimeError):
    """A target value lies outside the attainable range of the family."""


@dataclass(frozen=True)
class SvdSystem:
    """Discrete singular system {sigma_j, u_j, v_j} of a sampled operator.

    left_modes / right_modes hold the u_j / v_j samples as columns; they are
    orthonormal under the image / object quadrature weights.  Zero modes are
    excluded; their count is kept as null-space dimensions.
    """

    singular_values: np.ndarray
    left_modes: np.ndarray
    right_modes: np.ndarray
    image_weights: np.ndarray
    object_weights: np.ndarray
    null_dim_object: int = 0
    null_dim_image: int = 0

    @property
    def n_modes(self) -> int:
        return self.singular_values.size

    def image_dot(self, g: np.ndarray, h: np.ndarray) -> float:
        return float(np.dot(self.image_weights * g, h))

    def image_norm(self, g: np.ndarray) -> float:
        return float(np.sqrt(np.dot(self.image_weights, np.abs(g) ** 2)))

    def object_norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.dot(self.object_weights, np.abs(f) ** 2)))

    def project_image(self, g: np.ndarray) -> np.ndarray:
        """Components (g, u_j)_Y of an image vector on the left modes."""
        return self.left_modes.T @ (self.image_weights * g)

    def apply(self, f: np.ndarray) -> np.ndarray:
        """Forward map A f on samples."""
        coeff = self.right_modes.T @ (self.object_weights * f)
        return self.left_modes @ (self.singular_values * coeff)

    def validate(self, tol: float = 1e-8) -> None:
        s = self.singular_values
        if np.any(s <= 0) or np.any(np.diff(s) > 0):
            raise ValueError("singular values must be positive and nonincreasing")
        for modes, w, name in (
            (self.left_modes, self.image_weights, "left"),
            (self.right_modes, self.object_weights, "right"),
        ):
            gram = modes.T @ (w[:, None] * modes)
            if not np.allclose(gram, np.eye(self.n_modes), atol=tol):
                raise ValueError(f"{name} modes not orthonormal under weights")


@dataclass(frozen=True)
class RegularizedSolution:
    """A filtered solution together with its diagnostics."""

    coefficients: np.ndarray
    field_values: np.ndarray
    lam: float
    discrepancy: float
    energy: float
    filter: np.ndarray


@dataclass(frozen=True)
class NoiseModel:
    """Known noise energy and/or object-energy bound."""

    epsilon: float = 0.0
    energy_bound: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("noise energy must be >= 0")


@dataclass(frozen=True)
class SpectralWindow:
    """Family member U_lambda(mu) on [0, ||A||^2] defining filter mu*U(mu).

    `filter_fn`, when given, evaluates the window W(mu) = mu*U(mu) directly;
    sharp cutoffs use it to return exact 0/1 values.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    bound_c: float
    filter_fn: Callable[[np.ndarray], np.ndarray] | None = None
    lam: float = 0.0

    def window_values(self, mu: np.ndarray) -> np.ndarray:
        if self.filter_fn is not None:
            return np.asarray(self.filter_fn(mu), dtype=float)
        return mu * np.asarray(self.evaluator(mu), dtype=float)


def tikhonov_window(lam: float) -> SpectralWindow:
    """U(mu) = 1/(mu + lambda); the smooth filter mu/(mu + lambda)."""
    if lam <= 0:
        raise ParameterError("lambda must be > 0")
    return SpectralWindow(
        evaluator=lambda mu: 1.0 / (np.asarray(mu) + lam), bound_c=1.0 / lam, lam=lam
    )


def step_window(lam: float) -> SpectralWindow:
    """Sharp window: U(mu) = 1/mu for mu >= lambda, zero below.

    The cut is closed from above (mu == lambda retained) so the filter agrees
    with the truncated-SVD retention rule sigma^2 >= lambda.
    """
    if lam < 0:
        raise ParameterError("lambda must be >= 0")

    def u(mu):
        mu = np.asarray(mu, dtype=float)
        return np.where(mu >= lam, 1.0 / np.maximum(mu, np.finfo(float).tiny), 0.0)

    def w(mu):
        mu = np.asarray(mu, dtype=float)
        return np.where(mu >= lam, 1.0, 0.0)

    return SpectralWindow(
        evaluator=u, bound_c=1.0 / max(lam, np.finfo(float).tiny), filter_fn=w, lam=lam
    )


def svd_of_kernel(
    kernel_samples: np.ndarray,
    image_weights: np.ndarray,
    object_weights: np.ndarray,
) -> SvdSystem:
    """Singular system of the operator (Af)(x_i) = sum_j K_ij wx_j f_j.

    Computed as the SVD of B = sqrt(Wy) K sqrt(Wx); modes are rescaled back
    to function samples.  sum sigma_j^2 equals the weighted Frobenius norm of
    the kernel (the Hilbert-Schmidt bound).
    """
    K = np.asarray(kernel_samples, dtype=float)
    wy = np.asarray(image_weights, dtype=float)
    wx = np.asarray(object_weights, dtype=float)
    if not np.all(np.isfinite(K)):
        raise ValueError("kernel contains non-finite entries")
    if np.any(wy <= 0) or np.any(wx <= 0):
        raise ValueError("quadrature weights must be strictly positive")
    if K.shape != (wy.size, wx.size):
        raise ValueError("kernel shape does not match the grids")

    sy, sx = np.sqrt(wy), np.sqrt(wx)
    B = sy[:, None] * K * sx[None, :]
    U, s, Vt = np.linalg.svd(B, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return SvdSystem(
            singular_values=np.empty(0),
            left_modes=np.empty((wy.size, 0)),
            right_modes=np.empty((wx.size, 0)),
            image_weights=wy,
            object_weights=wx,
            null_dim_object=wx.size,
            null_dim_image=wy.size,
        )
    keep = s >= ZERO_MODE_RTOL * s[0]
    r = int(np.count_nonzero(keep))
    return SvdSystem(
        singular_values=s[:r].copy(),
        left_modes=U[:, :r] / sy[:, None],
        right_modes=Vt[:r].T / sx[:, None],
        image_weights=wy,
        object_weights=wx,
        null_dim_object=wx.size - r,
        null_dim_image=wy.size - r,
    )


def _filtered_solution(svd: SvdSystem, g: np.ndarray, filt: np.ndarray, lam: float) -> RegularizedSolution:
    """Assemble a solution with per-mode filter values W_j in [0, 1]."""
    g = np.asarray(g, dtype=float)
    proj = svd.project_image(g)
    coeff = filt * (proj / svd.singular_values)
    fvals = svd.right_modes @ coeff
    # residual splits into in-range filtered part and the range complement
    res_range = float(np.sum((svd.singular_values * coeff - proj) ** 2))
    res_perp = max(svd.image_norm(g) ** 2 - float(np.dot(proj, proj)), 0.0)
    discrepancy = float(np.sqrt(res_range + res_perp))
    energy = float(np.linalg.norm(coeff))
    return RegularizedSolution(
        coefficients=coeff,
        field_values=fvals,
        lam=lam,
        discrepancy=discrepancy,
        energy=energy,
        filter=filt,
    )


def generalized_solve(svd: SvdSystem, g: np.ndarray) -> RegularizedSolution:
    """Minimal-norm least-squares solution: coefficients (g,u_j)/sigma_j."""
    return _filtered_solution(svd, g, np.ones(svd.n_modes), lam=0.0)


@dataclass(frozen=True)
class PicardDiagnostics:
    """Per-mode decay comparison of data components against singular values."""

    singular_values: np.ndarray
    components: np.ndarray
    ratios: np.ndarray
    cumulative_energy: np.ndarray
    first_exceeding: int | None


def picard_diagnostics(
    svd: SvdSystem, g: np.ndarray, ratio_threshold: float = 1e6
) -> PicardDiagnostics:
    """Ratios |(g,u_j)|/sigma_j and the running solution energy.

    `first_exceeding` flags the first mode whose ratio passes the threshold,
    the practical signature of a data component not in the operator range.
    """
    proj = svd.project_image(np.asarray(g, dtype=float))
    comps = np.abs(proj)
    ratios = comps / svd.singular_values
    cumulative = np.cumsum(ratios**2)
    exceeding = np.nonzero(ratios > ratio_threshold)[0]
    first = int(exceeding[0]) if exceeding.size else None
    return PicardDiagnostics(
        singular_values=svd.singular_values.copy(),
        components=comps,
        ratios=ratios,
        cumulative_energy=cumulative,
        first_exceeding=first,
    )


def tikhonov_solve(svd: SvdSystem, g: np.ndarray, lam: float) -> RegularizedSolution:
    """Filter sigma^2/(sigma^2 + lambda) applied to the generalized solution."""
    if lam <= 0:
        raise ParameterError("lambda must be > 0 (use generalized_solve for lambda = 0)")
    mu = svd.singular_values**2
    return _filtered_solution(svd, g, mu / (mu + lam), lam=lam)


def tikhonov_direct_solve(
    operator_samples: np.ndarray,
    image_weights: np.ndarray,
    object_weights: np.ndarray,
    g: np.ndarray,
    lam: float,
) -> np.ndarray:
    """Dense solve of the normal equations (A*A + lambda I) f = A*g.

    Bypasses the SVD entirely; serves as the cross-validation oracle for
    :func:`tikhonov_solve`.
    """
    if lam <= 0:
        raise ParameterError("lambda must be > 0")
    K = np.asarray(operator_samples, dtype=float)
    wy = np.asarray(image_weights, dtype=float)
    wx = np.asarray(object_weights, dtype=float)
    A = K * wx[None, :]
    Astar = K.T * wy[None, :]
    M = Astar @ A + lam * np.eye(wx.size)
    logger.debug("normal-equations condition estimate: %.3e", np.linalg.cond(M))
    return np.linalg.solve(M, Astar @ np.asarray(g, dtype=float))


def tsvd_solve(
    svd: SvdSystem,
    g: np.ndarray,
    lam: float | None = None,
    n_modes: int | None = None,
) -> RegularizedSolution:
    """Truncated SVD: retain modes with sigma^2 >= lambda, or the first J."""
    if (lam is None) == (n_modes is None):
        raise ParameterError("give exactly one of lam or n_modes")
    if n_modes is not None:
        if n_modes < 0:
            raise ParameterError("mode count must be >= 0")
        J = min(n_modes, svd.n_modes)
        filt = np.where(np.arange(svd.n_modes) < J, 1.0, 0.0)
        if J == 0:
            lam_eff = float(svd.singular_values[0] ** 2) * (1.0 + 1e-12)
        else:
            lam_eff = float(svd.singular_values[J - 1] ** 2)
    else:
        if lam < 0:
            raise ParameterError("lambda must be >= 0")
        filt = np.where(svd.singular_values**2 >= lam, 1.0, 0.0)
        lam_eff = float(lam)
    return _filtered_solution(svd, g, filt, lam=lam_eff)


def spectral_window_solve(
    svd: SvdSystem, g: np.ndarray, window: SpectralWindow
) -> RegularizedSolution:
    """Solution with coefficients sigma_j U(sigma_j^2) (g,u_j)."""
    mu = svd.singular_values**2
    filt = window.window_values(mu)
    if np.any(filt < -1e-12) or np.any(filt > 1.0 + 1e-12):
        raise ParameterError("window violates 0 <= mu U(mu) <= 1 on the sampled spectrum")
    return _filtered_solution(svd, g, filt, lam=window.lam)


def _bisect_monotone(
    fun: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    increasing: bool,
    max_iter: int = 200,
    rtol: float = 1e-6,
) -> float:
    """Bisection for fun(lam) = target with fun monotone on [lo, hi]."""
    f_lo, f_hi = fun(lo), fun(hi)
    lo_v, hi_v = (f_lo, f_hi) if increasing else (f_hi, f_lo)
    if not (min(lo_v, hi_v) - 1e-12 <= target <= max(lo_v, hi_v) + 1e-12):
        raise RangeError(
            f"target {target:.6g} outside attainable range [{min(f_lo, f_hi):.6g}, "
            f"{max(f_lo, f_hi):.6g}]"
        )
    a, b = lo, hi
    for _ in range(max_iter):
        mid = np.sqrt(a * b)  # log-midpoint: the family spans many decades
        val = fun(mid)
        above = val > target
        if above == increasing:
            b = mid
        else:
            a = mid
        if abs(val - target) <= rtol * max(abs(target), 1e-300):
            return mid
        if (b - a) <= 1e-15 * b:
            break
    return np.sqrt(a * b)


@dataclass(frozen=True)
class LambdaChoice:
    lam: float
    strategy: str
    diagnostics: dict = field(default_factory=dict)


def _lcurve_corner(lams: np.ndarray, disc: np.ndarray, ener: np.ndarray) -> tuple[int, np.ndarray]:
    """Index of maximum discrete curvature on the log-log polyline.

    Curvature is the signed Menger curvature; the corner of an L-shaped locus
    traversed with increasing lambda turns counterclockwise (positive sign).
    """
    x = np.log(np.maximum(disc, 1e-300))
    y = np.log(np.maximum(ener, 1e-300))
    kappa = np.full(lams.size, -np.inf)
    for i in range(1, lams.size - 1):
        ax, ay = x[i] - x[i - 1], y[i] - y[i - 1]
        bx, by = x[i + 1] - x[i], y[i + 1] - y[i]
        cross = ax * by - ay * bx
        la = np.hypot(ax, ay)
        lb = np.hypot(bx, by)
        lc = np.hypot(x[i + 1] - x[i - 1], y[i + 1] - y[i - 1])
        if la * lb * lc == 0:
            continue
        kappa[i] = 2.0 * cross / (la * lb * lc)
    best = int(np.argmax(kappa))
    # ties broken toward smaller lambda (grid is sorted ascending)
    ties = np.nonzero(np.isclose(kappa, kappa[best], rtol=1e-12, atol=0.0))[0]
    best = int(ties[0])
    return best, kappa


def choose_lambda(
    svd: SvdSystem,
    g: np.ndarray,
    strategy: str,
    noise: NoiseModel | None = None,
    grid: Sequence[float] | None = None,
) -> LambdaChoice:
    """Pick a regularization parameter.

    strategy:
      - "discrepancy": ||A f_lam - g|| = epsilon, bisection.
      - "energy": ||f_lam|| = E, bisection.
      - "miller": lambda = (epsilon/E)^2 in closed form.
      - "lcurve": grid point of maximum discrete curvature of
        (log discrepancy, log energy).
    """
    g = np.asarray(g, dtype=float)
    s1 = svd.singular_values[0]
    lo, hi = 1e-14 * s1**2, 1e6 * s1**2

    if strategy == "miller":
        if noise is None or noise.epsilon <= 0 or noise.energy_bound <= 0:
            raise ParameterError("miller needs epsilon > 0 and energy bound > 0")
        lam = (noise.epsilon / noise.energy_bound) ** 2
        return LambdaChoice(lam=lam, strategy=strategy)

    if strategy == "discrepancy":
        if noise is None or noise.epsilon <= 0:
            raise ParameterError("discrepancy needs epsilon > 0")
        lam = _bisect_monotone(
            lambda l: tikhonov_solve(svd, g, l).discrepancy,
            noise.epsilon, lo, hi, increasing=True,
        )
        sol = tikhonov_solve(svd, g, lam)
        return LambdaChoice(lam=lam, strategy=strategy, diagnostics={"discrepancy": sol.discrepancy})

    if strategy == "energy":
        if noise is None or noise.energy_bound <= 0:
            raise ParameterError("energy needs an energy bound > 0")
        lam = _bisect_monotone(
            lambda l: tikhonov_solve(svd, g, l).energy,
            noise.energy_bound, lo, hi, increasing=False,
        )
        sol = tikhonov_solve(svd, g, lam)
        return LambdaChoice(lam=lam, strategy=strategy, diagnostics={"energy": sol.energy})

    if strategy == "lcurve":
        if grid is None or len(grid) < 8:
            raise ParameterError("lcurve needs a grid of at least 8 lambda values")
        lams = np.sort(np.asarray(grid, dtype=float))
        if np.any(lams <= 0):
            raise ParameterError("lambda grid must be positive")
        sols = [tikhonov_solve(svd, g, l) for l in lams]
        disc = np.array([s.discrepancy for s in sols])
        ener = np.array([s.energy for s in sols])
        best, kappa = _lcurve_corner(lams, disc, ener)
        if not np.isfinite(kappa[best]) or kappa[best] <= 0:
            raise RangeError("no corner: L-curve is flat or degenerate on this grid")
        return LambdaChoice(
            lam=float(lams[best]),
            strategy=strategy,
            diagnostics={"curvature": kappa, "grid": lams, "discrepancy": disc, "energy": ener},
        )

    raise ParameterError(f"unknown strategy {strategy!r}")


def lambda_sweep(svd: SvdSystem, g: np.ndarray, grid: Sequence[float]) -> list[dict]:
    """Tikhonov diagnostics for every lambda in the grid, ordered by lambda.

    The batch realization of interactive tuning: one row per lambda with the
    discrepancy/energy trade-off and the solution snapshot.
    """
    lams = np.asarray(list(grid), dtype=float)
    if lams.size == 0 or np.any(lams <= 0):
        raise ParameterError("grid must be nonempty and positive")
    rows = []
    for lam in np.sort(lams):
        sol = tikhonov_solve(svd, g, float(lam))
        rows.append(
            {
                "lambda": float(lam),
                "discrepancy": sol.discrepancy,
                "energy": sol.energy,
                "solution": sol.field_values,
            }
        )
    return rows
