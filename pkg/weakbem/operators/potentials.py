"""Single and double layer potentials evaluated off the surface."""
from typing import Optional, Tuple

import numpy as np

from weakbem.config.settings import get_settings
from weakbem.exceptions import ContractViolationError, SingularityError
from weakbem.operators.kernels import FOUR_PI
from weakbem.operators.projection import surface_quadrature
from weakbem.operators.spaces import DofSpace

# Target points per block when forming point-by-quadrature-point kernel matrices.
_POINT_BLOCK = 64


def _density_at_quadrature(space: DofSpace, coeffs: np.ndarray, order: int) -> Tuple[np.ndarray, ...]:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape != (space.dof_count,):
        raise ContractViolationError(f"expected {space.dof_count} coefficients, got shape {coeffs.shape}")
    points, weights, _, bary = surface_quadrature(space.mesh, order)
    basis = space.basis_values(bary)
    density = np.einsum("ta,qa->tq", coeffs[space.local2global], basis)
    flat_normals = np.repeat(space.mesh.normals[:, None, :], weights.shape[1], axis=1)
    return points.reshape(-1, 3), (weights * density).ravel(), flat_normals.reshape(-1, 3)


def _evaluate(space: DofSpace, coeffs, targets, k: float, order: Optional[int], double_layer: bool) -> np.ndarray:
    if not k > 0.0:
        raise ContractViolationError(f"wavenumber must be positive, got {k}")
    order = get_settings().potential_quad_order if order is None else order
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    sources, weighted_density, normals = _density_at_quadrature(space, coeffs, order)

    values = np.empty(targets.shape[0], dtype=np.complex128)
    for start in range(0, targets.shape[0], _POINT_BLOCK):
        block = targets[start:start + _POINT_BLOCK]
        diff = block[:, None, :] - sources[None, :, :]
        r = np.linalg.norm(diff, axis=2)
        if np.any(r == 0.0):
            raise SingularityError("potential evaluated at a surface quadrature point")
        green = np.exp(1j * k * r) / (FOUR_PI * r)
        if double_layer:
            # dG/dn_y with (y - x).n = -diff.n
            projection = -np.einsum("psd,sd->ps", diff, normals)
            green = green * (1j * k * r - 1.0) * projection / (r * r)
        values[start:start + block.shape[0]] = green @ weighted_density
    return values


def single_layer_potential(space: DofSpace, coeffs: np.ndarray, targets: np.ndarray, k: float, order: Optional[int] = None) -> np.ndarray:
    """Integral of G(x, y) * density(y) over the surface, at each target x."""
    return _evaluate(space, coeffs, targets, k, order, double_layer=False)


def double_layer_potential(space: DofSpace, coeffs: np.ndarray, targets: np.ndarray, k: float, order: Optional[int] = None) -> np.ndarray:
    """Integral of dG/dn_y(x, y) * density(y) over the surface, at each target x."""
    return _evaluate(space, coeffs, targets, k, order, double_layer=True)
