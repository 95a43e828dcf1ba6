"""Lattice sums, Dirichlet L-values and the Eisenstein-Kronecker series."""
from lattice.characters import DirichletChar, LValue, dirichlet_L, kronecker_character
from lattice.eisenstein import EisensteinSpec, eisenstein_mahler, specialized_m10
from lattice.sums import (
    LatticeSum,
    LatticeSumSpec,
    central_value,
    d3,
    exact_constant_check,
    lattice_sum,
    r_n,
    zagier_A,
    zagier_A_coefficients,
    zagier_B_identity,
)

__all__ = [
    "DirichletChar",
    "EisensteinSpec",
    "LValue",
    "LatticeSum",
    "LatticeSumSpec",
    "central_value",
    "d3",
    "dirichlet_L",
    "eisenstein_mahler",
    "exact_constant_check",
    "kronecker_character",
    "lattice_sum",
    "r_n",
    "specialized_m10",
    "zagier_A",
    "zagier_A_coefficients",
    "zagier_B_identity",
]
