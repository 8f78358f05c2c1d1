"""Electrode datasets and the analytic model conductivities used in tests.

Point electrodes at uniform angles on the unit circle; each excitation pairs
the injected current samples with the measured potentials.  Currents must
conserve charge and potentials are stored with zero mean per excitation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Excitation",
    "ElectrodeDataset",
    "gaussian_bump_conductivity",
    "three_inclusion_conductivity",
    "MODEL_BUMP_1",
    "MODEL_BUMP_2",
    "INCLUSION_CENTERS",
    "INCLUSION_SIGNS",
]

#: (amplitude, exponent, x, y) of the two single-bump phantoms
MODEL_BUMP_1 = (1.0, -1500.0, 0.0, 0.4)
MODEL_BUMP_2 = (-0.5, -1000.0, 0.5, 0.0)

#: centers and perturbation signs of the three-inclusion phantom
INCLUSION_CENTERS = np.array([(0.0, 0.4), (0.5, -0.2), (-0.3, -0.2)])
INCLUSION_SIGNS = np.array([1.0, -1.0, 1.0])


def gaussian_bump_conductivity(x, y, params=MODEL_BUMP_1):
    """sigma = 1 + a exp[b ((x-x0)^2 + (y-y0)^2)^2], quartic-tail bump."""
    a, b, x0, y0 = params
    return 1.0 + a * np.exp(b * ((np.asarray(x) - x0) ** 2 + (np.asarray(y) - y0) ** 2) ** 2)


def three_inclusion_conductivity(x, y):
    """Unit background with two raised and one lowered inclusion."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = 1.0
    s = s + np.exp(-1500.0 * (x**2 + (y - 0.4) ** 2) ** 2)
    s = s - 0.5 * np.exp(-2500.0 * ((x - 0.5) ** 2 + (y + 0.2) ** 2) ** 2)
    s = s + 2.0 * np.exp(-1000.0 * ((x + 0.3) ** 2 + (y + 0.2) ** 2) ** 2)
    return s


@dataclass(frozen=True)
class Excitation:
    current: np.ndarray
    potential: np.ndarray


@dataclass(frozen=True)
class ElectrodeDataset:
    electrode_angles: np.ndarray
    excitations: list[Excitation] = field(default_factory=list)

    @property
    def n_electrodes(self) -> int:
        return self.electrode_angles.size

    def validate(self, tol: float = 1e-10) -> None:
        for k, exc in enumerate(self.excitations):
            if exc.current.size != self.n_electrodes or exc.potential.size != self.n_electrodes:
                raise ValueError(f"excitation {k} does not match the electrode count")
            scale = max(np.abs(exc.current).max(), 1.0)
            if abs(exc.current.sum()) > tol * scale * self.n_electrodes:
                raise ValueError(f"excitation {k} violates charge conservation")

    def project_boundary(self, values: np.ndarray, l: int, j: int) -> float:
        """Trapezoid projection (2 pi / N) sum values * u_l^j over electrodes.

        Exact for harmonics below the electrode Nyquist count.
        """
        from .green import boundary_harmonic

        u = boundary_harmonic(l, j, self.electrode_angles)
        return float((2 * np.pi / self.n_electrodes) * np.dot(values, u))

    def to_json(self) -> str:
        return json.dumps(
            {
                "electrode_angles": self.electrode_angles.tolist(),
                "excitations": [
                    {"current": e.current.tolist(), "potential": e.potential.tolist()}
                    for e in self.excitations
                ],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ElectrodeDataset":
        raw = json.loads(text)
        ds = cls(
            electrode_angles=np.asarray(raw["electrode_angles"], dtype=float),
            excitations=[
                Excitation(
                    current=np.asarray(e["current"], dtype=float),
                    potential=np.asarray(e["potential"], dtype=float),
                )
                for e in raw["excitations"]
            ],
        )
        ds.validate(tol=1e-8)
        return ds
