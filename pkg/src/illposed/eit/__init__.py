"""Electrical impedance tomography on the unit disc."""

from .basis import DiscEigenbasis, build_disc_eigenbasis, disc_eigenfunction
from .data import (
    ElectrodeDataset,
    Excitation,
    gaussian_bump_conductivity,
    three_inclusion_conductivity,
)
from .fem import CompatibilityError, ConductivityField, fem_assemble, fem_forward_solve
from .forward import add_noise, default_forward_mesh, solve_forward_dataset, trig_patterns
from .green import (
    boundary_harmonic,
    green_neumann_boundary,
    green_neumann_boundary_series,
    green_neumann_disc,
)
from .linear import (
    cutoff_from_crossing,
    linear_kernel_disc,
    linearized_reconstruct,
    locate_extrema,
)
from .mesh import DiscMesh, MeshError, disc_mesh
from .single import harmonic_part, single_recon_Y, single_recon_phi

__all__ = [
    "DiscEigenbasis",
    "build_disc_eigenbasis",
    "disc_eigenfunction",
    "ElectrodeDataset",
    "Excitation",
    "gaussian_bump_conductivity",
    "three_inclusion_conductivity",
    "CompatibilityError",
    "ConductivityField",
    "fem_assemble",
    "fem_forward_solve",
    "add_noise",
    "default_forward_mesh",
    "solve_forward_dataset",
    "trig_patterns",
    "boundary_harmonic",
    "green_neumann_boundary",
    "green_neumann_boundary_series",
    "green_neumann_disc",
    "cutoff_from_crossing",
    "linear_kernel_disc",
    "linearized_reconstruct",
    "locate_extrema",
    "DiscMesh",
    "MeshError",
    "disc_mesh",
    "harmonic_part",
    "single_recon_Y",
    "single_recon_phi",
]
