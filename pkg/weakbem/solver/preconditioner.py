"""Left preconditioner blockdiag(M_u^-1, M_lambda^-1) from sparse mass factorizations."""
from typing import Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import FactorizationError
from weakbem.operators.mass import MassMatrix

logger = get_logger(__name__)

_SYMMETRY_TOLERANCE = 1e-12


class MassFactor:
    """Sparse LU of a symmetric positive definite mass matrix."""

    def __init__(self, mass: Union[MassMatrix, sp.spmatrix], label: str = "mass"):
        matrix = mass.entries if isinstance(mass, MassMatrix) else mass
        matrix = sp.csc_matrix(matrix, dtype=np.float64)
        if matrix.shape[0] != matrix.shape[1]:
            raise FactorizationError(f"{label} matrix is not square: {matrix.shape}")
        asymmetry = abs(matrix - matrix.T).max() if matrix.nnz else 0.0
        if asymmetry > _SYMMETRY_TOLERANCE * max(abs(matrix).max(), 1.0):
            raise FactorizationError(f"{label} matrix is not symmetric (max asymmetry {asymmetry:.3e})")
        try:
            self._lu = splu(matrix, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                            options={"SymmetricMode": True})
        except RuntimeError as e:
            raise FactorizationError(f"{label} matrix is singular: {e}") from e
        pivots = self._lu.U.diagonal()
        if not np.all(pivots > 0.0):
            raise FactorizationError(f"{label} matrix is not positive definite")
        self.size = matrix.shape[0]

    def solve(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r)
        if np.iscomplexobj(r):
            return self._lu.solve(np.ascontiguousarray(r.real)) + 1j * self._lu.solve(np.ascontiguousarray(r.imag))
        return self._lu.solve(np.ascontiguousarray(r, dtype=np.float64))


class Preconditioner:
    """Applies (M_u^-1 r_u, M_lambda^-1 r_lambda) to a blocked residual."""

    def __init__(self, factor_u: MassFactor, factor_lambda: MassFactor):
        self.factor_u = factor_u
        self.factor_lambda = factor_lambda

    @property
    def size(self) -> int:
        return self.factor_u.size + self.factor_lambda.size

    def apply(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=np.complex128)
        n_u = self.factor_u.size
        return np.concatenate([self.factor_u.solve(r[:n_u]), self.factor_lambda.solve(r[n_u:])])

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.apply(r)


def build_preconditioner(mass_u: Union[MassMatrix, sp.spmatrix], mass_lambda: Union[MassMatrix, sp.spmatrix]) -> Preconditioner:
    """
    Factorize both diagonal mass blocks once.

    Args:
        mass_u: Gram matrix of the Dirichlet-trace space
        mass_lambda: Gram matrix of the Neumann-trace space

    Returns:
        Preconditioner applying the inverse mass matrices block-wise
    """
    preconditioner = Preconditioner(MassFactor(mass_u, "u mass"), MassFactor(mass_lambda, "lambda mass"))
    logger.debug("Preconditioner built", n_u=preconditioner.factor_u.size, n_lambda=preconditioner.factor_lambda.size)
    return preconditioner
