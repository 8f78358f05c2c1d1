"""Channel models: power corrections, perturbative parts, dispersion kernels,
and the space-like prediction compared against data in the fits.

Channels: the chirality difference "V-A" (no perturbative part, power
corrections only), and "V", "A", "V+A" whose once-subtracted correlators are
handled through the first derivative, adding the logarithmic-derivative
perturbative term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..quadrature import gauss_legendre
from .rg import LAMBDA_QCD_3FL, a_strong

__all__ = [
    "ADLER_K",
    "F_PI",
    "ChannelModel",
    "ErrorCorridor",
    "adler_D",
    "ope_F",
    "f_qcd_timelike",
    "dispersion_kernel",
    "qcd_prediction_tilde_F",
]

#: massless-quark logarithmic-derivative coefficients K_0..K_3, 3 flavors
ADLER_K = (1.0, 1.0, 1.64, 6.37)

#: pion decay constant, GeV
F_PI = 0.1307

CHANNELS = ("V-A", "V", "A", "V+A")


@dataclass(frozen=True)
class ChannelModel:
    """Which channel is fitted, at which order, with which power corrections.

    `dims` lists the power-correction dimensions carried by the parameter
    vector, in order.  `nlo_c6_tilde` selects the scheme constant of the
    next-to-leading correction to the d = 6 term of the chirality-difference
    channel (0 means leading order); the renormalization scale is tied to
    |s|, so the associated logarithm vanishes.
    """

    channel: str = "V-A"
    order: str = "LO"
    dims: tuple[int, ...] = (6,)
    nlo_c6_tilde: float = 0.0
    lambda_qcd: float = LAMBDA_QCD_3FL
    loops: int = 4
    k4: float | None = None  # optional O(a^4) coefficient, excluded by default

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.order not in ("LO", "NLO"):
            raise ValueError("order must be LO or NLO")
        lo = 6 if self.channel == "V-A" else 4
        if any(d < lo or d % 2 or d > 10 for d in self.dims):
            raise ValueError(f"dims {self.dims} outside the channel's range")

    @property
    def has_pion_pole(self) -> bool:
        return self.channel in ("V-A", "A", "V+A")

    @property
    def adler_multiplicity(self) -> int:
        """Number of perturbative towers: 0 for V-A, 2 for V+A, else 1."""
        return {"V-A": 0, "V": 1, "A": 1, "V+A": 2}[self.channel]


def adler_D(s: float, model: ChannelModel) -> float:
    """Logarithmic-derivative perturbative series at space-like s < 0.

    (1/4pi^2) sum_n K_n a(-s)^n with n <= 3 by default; an O(a^4) term enters
    only with a user-supplied coefficient.
    """
    if s >= 0:
        raise ValueError("space-like evaluation needs s < 0")
    a = a_strong(-s, model.loops, model.lambda_qcd)
    coeffs = list(ADLER_K)
    if model.k4 is not None:
        coeffs.append(model.k4)
    return float(np.polyval(coeffs[::-1], a)) / (4 * np.pi**2)


def ope_F(s, O: np.ndarray, model: ChannelModel):
    """Space-like prediction of the fitted correlator combination.

    V-A:  sum_d O_d/(-s)^{d/2}, the d = 6 term carrying the optional
          correction factor (1 + c6~ * alpha_s(-s)/(4 pi)).
    V/A/V+A: perturbative derivative term plus sum_d (d/2) O_d/(-s)^{d/2},
          plus the pion pole f_pi^2/s for A and V+A.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s >= 0):
        raise ValueError("space-like evaluation needs s < 0")
    O = np.asarray(O, dtype=float)
    if O.size != len(model.dims):
        raise ValueError("parameter vector does not match the model dimensions")
    out = np.zeros_like(s)
    for Od, d in zip(O, model.dims):
        term = Od / (-s) ** (d / 2)
        if model.channel == "V-A":
            if d == 6 and model.order == "NLO":
                a = np.array([a_strong(-x, model.loops, model.lambda_qcd) for x in np.atleast_1d(s)])
                a = a.reshape(s.shape) if s.shape else float(a[0])
                term = term * (1.0 + model.nlo_c6_tilde * a / 4.0)
        else:
            term = (d / 2.0) * term
        out = out + term
    if model.adler_multiplicity:
        pert = np.array([adler_D(float(x), model) for x in np.atleast_1d(s)])
        pert = pert.reshape(s.shape) if s.shape else float(pert[0])
        out = out + model.adler_multiplicity * pert
    if model.channel in ("A", "V+A"):
        out = out + F_PI**2 / s
    return out if out.ndim else float(out)


def f_qcd_timelike(s, O: np.ndarray, model: ChannelModel):
    """Imaginary part on the time-like tail above the data window.

    V-A vanishes at leading order; at NLO it is O_6 alpha_s(s)/(4 (-s)^3).
    V and A tend to the parton value (1/4pi)(1 + alpha_s/pi); V+A is their
    sum.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("time-like evaluation needs s > 0")
    O = np.asarray(O, dtype=float)
    if model.channel == "V-A":
        if model.order == "LO":
            z = np.zeros_like(s)
            return z if z.ndim else 0.0
        o6 = O[model.dims.index(6)] if 6 in model.dims else 0.0
        a = np.array([a_strong(float(x), model.loops, model.lambda_qcd) for x in np.atleast_1d(s)])
        a = a.reshape(s.shape) if s.shape else float(a[0])
        out = o6 / (-s) ** 3 * (np.pi * a) / 4.0
        return out if np.ndim(out) else float(out)
    a = np.array([a_strong(float(x), model.loops, model.lambda_qcd) for x in np.atleast_1d(s)])
    a = a.reshape(s.shape) if s.shape else float(a[0])
    parton = (1.0 + a) / (4 * np.pi)
    out = model.adler_multiplicity * parton
    return out if np.ndim(out) else float(out)


def dispersion_kernel(channel: str, x, z):
    """Cauchy kernel relating the space-like prediction to the time-like
    imaginary part.

    1/(z - x) for the unsubtracted chirality difference; -x/(z - x)^2 for the
    first-derivative channels (the sign folds the derivative relation
    F = -s dPi/ds into the common convention F = (1/pi) int K f).
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if channel == "V-A":
        return 1.0 / (z - x)
    return -x / (z - x) ** 2


@dataclass(frozen=True)
class ErrorCorridor:
    """A-priori accuracy envelope of the space-like prediction on [s2, s1].

    form "power": magnitude of the first omitted power correction,
    O_max/(-s)^{d/2} (times d/2 for the first-derivative channels);
    form "perturbative_k3": last known perturbative term; form "combined":
    both in quadrature.
    """

    s1: float
    s2: float
    form: str = "power"
    omitted_dim: int = 8
    omitted_max: float = 1.5e-3
    n_nodes: int = 64

    def __post_init__(self):
        if not (self.s2 < self.s1 < 0):
            raise ValueError("need s2 < s1 < 0")
        if self.form not in ("power", "perturbative_k3", "combined"):
            raise ValueError(f"unknown corridor form {self.form!r}")

    @property
    def length(self) -> float:
        return self.s1 - self.s2

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return gauss_legendre(self.s2, self.s1, self.n_nodes)

    def sigma_L(self, s, model: ChannelModel):
        s = np.asarray(s, dtype=float)
        power = None
        if self.form in ("power", "combined"):
            pref = 1.0 if model.channel == "V-A" else self.omitted_dim / 2.0
            power = pref * abs(self.omitted_max) / (-s) ** (self.omitted_dim / 2)
        pert = None
        if self.form in ("perturbative_k3", "combined"):
            a = np.array([a_strong(float(-x), model.loops, model.lambda_qcd) for x in np.atleast_1d(s)])
            a = a.reshape(s.shape) if s.shape else float(a[0])
            pert = ADLER_K[3] * a**3 / (4 * np.pi**2)
        if self.form == "power":
            out = power
        elif self.form == "perturbative_k3":
            out = pert
        else:
            out = np.sqrt(power**2 + pert**2)
        return out if np.ndim(out) else float(out)

    def weight(self, s, model: ChannelModel):
        return 1.0 / self.sigma_L(s, model) ** 2


def _tail_cut(model: ChannelModel, O: np.ndarray, s_max: float, ratio: float = 1e-12) -> float:
    """Upper limit where the tail integrand has fallen by `ratio` relative to
    its value at the start of the tail (probed on a log grid)."""
    s_ref = -1.0  # reference space-like point for the decay scan
    base = abs(
        dispersion_kernel(model.channel, s_ref, s_max * 1.001)
        * f_qcd_timelike(s_max * 1.001, O, model)
    )
    if base == 0.0:
        return 10.0 * s_max
    z = s_max
    for _ in range(60):
        z *= 2.0
        val = abs(
            dispersion_kernel(model.channel, s_ref, z) * f_qcd_timelike(z, O, model)
        )
        if val < ratio * base:
            return z
    return z


def qcd_prediction_tilde_F(
    s,
    O: np.ndarray,
    model: ChannelModel,
    s_max: float,
    z_cut: float | None = None,
    n_tail: int = 128,
):
    """Space-like prediction with the pion pole and the time-like tail moved
    to the theory side:

        F~(s) = F(s) [- f_pi^2/s for V-A] - (1/pi) int_{s_max}^{Z} K(s,z) f(z) dz.

    For A and V+A the pole already sits inside the prediction itself.  The
    tail is integrated after the substitution t = 1/z, which turns the
    rational decay into a smooth finite-interval integrand.
    """
    s = np.asarray(s, dtype=float)
    O = np.asarray(O, dtype=float)
    out = ope_F(s, O, model)
    if model.channel == "V-A":
        out = out - F_PI**2 / s

    if z_cut is None:
        z_cut = _tail_cut(model, O, s_max)
    if z_cut > s_max:
        t_nodes, t_w = gauss_legendre(1.0 / z_cut, 1.0 / s_max, n_tail)
        z = 1.0 / t_nodes
        fq = f_qcd_timelike(z, O, model)
        if np.any(fq != 0.0):
            K = dispersion_kernel(model.channel, s.reshape(-1, 1), z.reshape(1, -1))
            tail = (K * (fq / t_nodes**2)) @ t_w / np.pi
            out = out - tail.reshape(s.shape)
    return out if np.ndim(out) else float(out)
