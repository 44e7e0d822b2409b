"""Helmholtz kernels, trace spaces and Galerkin matrices."""

from weakbem.operators.kernels import green_kernel, green_normal_derivative, green_normal_derivative_target
from weakbem.operators.spaces import DofSpace, build_space, parse_space_kind
from weakbem.operators.mass import MassMatrix, assemble_mass
from weakbem.operators.projection import integrate_against_basis, surface_quadrature
from weakbem.operators.assembly import (
    BoundaryOperatorMatrix,
    OperatorAssembler,
    assemble_boundary_operator,
    assemble_calderon_operators,
)
from weakbem.operators.potentials import double_layer_potential, single_layer_potential
from weakbem.operators.spectral import rayleigh_quotient
from weakbem.operators.matrix_io import read_matrix_dump, write_matrix_dump

__all__ = [
    # Kernels
    "green_kernel",
    "green_normal_derivative",
    "green_normal_derivative_target",
    # Spaces
    "DofSpace",
    "build_space",
    "parse_space_kind",
    # Mass and load vectors
    "MassMatrix",
    "assemble_mass",
    "integrate_against_basis",
    "surface_quadrature",
    # Boundary operators
    "BoundaryOperatorMatrix",
    "OperatorAssembler",
    "assemble_boundary_operator",
    "assemble_calderon_operators",
    "rayleigh_quotient",
    # Potentials
    "single_layer_potential",
    "double_layer_potential",
    # Matrix dump
    "read_matrix_dump",
    "write_matrix_dump",
]
