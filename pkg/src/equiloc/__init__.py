"""Exact equivariant localization for Hamiltonian torus actions."""

from .errors import EquilocError
from .geometry import (
    HamiltonianSpace,
    build_coadjoint,
    build_toric,
    coadjoint,
    dualize,
    polygon,
    power,
    product,
    restrict_subtorus,
    segment,
    validate,
)
from .localize import abbv_integrate, symplectic_volume
from .dhmeasure import dh_measure, nonabelian_reduced_integral, wall_jump
from .quantize import k_multiplicities, rr_character

__all__ = [
    "EquilocError",
    "HamiltonianSpace",
    "abbv_integrate",
    "build_coadjoint",
    "build_toric",
    "coadjoint",
    "dh_measure",
    "dualize",
    "k_multiplicities",
    "nonabelian_reduced_integral",
    "polygon",
    "power",
    "product",
    "restrict_subtorus",
    "rr_character",
    "segment",
    "symplectic_volume",
    "validate",
    "wall_jump",
]

__version__ = "0.1.0"
