"""Rayleigh quotients of Galerkin matrices."""
from typing import Union

import numpy as np
import scipy.sparse as sp

from weakbem.exceptions import ContractViolationError
from weakbem.operators.assembly import BoundaryOperatorMatrix
from weakbem.operators.mass import MassMatrix


def rayleigh_quotient(
    matrix: Union[BoundaryOperatorMatrix, np.ndarray],
    mass: Union[MassMatrix, sp.spmatrix, np.ndarray],
    coeffs: np.ndarray,
) -> complex:
    """c^H A c / c^H M c; approximates the operator eigenvalue when c interpolates an eigenfunction."""
    entries = matrix.entries if isinstance(matrix, BoundaryOperatorMatrix) else np.asarray(matrix)
    gram = mass.entries if isinstance(mass, MassMatrix) else mass
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if entries.shape[0] != entries.shape[1] or entries.shape[1] != coeffs.size:
        raise ContractViolationError(f"Rayleigh quotient needs a square matrix matching {coeffs.size} coefficients")
    denominator = np.vdot(coeffs, gram @ coeffs)
    if denominator == 0.0:
        raise ContractViolationError("Rayleigh quotient of a zero coefficient vector")
    return complex(np.vdot(coeffs, entries @ coeffs) / denominator)
