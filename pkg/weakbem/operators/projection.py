"""Quadrature of boundary functions against trace-space basis functions."""
from typing import Callable, Optional, Tuple

import numpy as np

from weakbem.config.settings import get_settings
from weakbem.exceptions import AssemblyError
from weakbem.geometry.mesh import Mesh
from weakbem.operators.spaces import DofSpace
from weakbem.quadrature.triangle import gauss_triangle

# g(points (N, 3), normals (N, 3)) -> values (N,)
BoundaryFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


def surface_quadrature(mesh: Mesh, order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Physical quadrature points over every triangle.

    Returns:
        points (nt, Q, 3), weights (nt, Q) including the area element,
        smooth surface normals (nt, Q, 3), and the barycentric rule points (Q, 3)
    """
    rule = gauss_triangle(order)
    corners = mesh.vertices[mesh.triangles]
    points = np.einsum("qa,tad->tqd", rule.points, corners)
    weights = 2.0 * mesh.areas[:, None] * rule.weights[None, :]
    triangle_ids = np.broadcast_to(np.arange(mesh.n_triangles)[:, None], weights.shape)
    normals = mesh.surface_normals(points.reshape(-1, 3), triangle_ids.ravel()).reshape(points.shape)
    return points, weights, normals, rule.points


def evaluate_on_surface(func: BoundaryFunction, points: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """Evaluate a boundary function on (nt, Q, 3) point arrays."""
    values = np.asarray(func(points.reshape(-1, 3), normals.reshape(-1, 3)), dtype=np.complex128)
    return values.reshape(points.shape[:-1])


def integrate_against_basis(space: DofSpace, func: BoundaryFunction, order: Optional[int] = None) -> np.ndarray:
    """
    Load vector b_i = integral over the surface of g * phi_i.

    Args:
        space: Test space
        func: Boundary function g(points, normals)
        order: Triangle rule order (defaults to the rhs_quad_order setting)

    Returns:
        Complex vector of length space.dof_count
    """
    order = get_settings().rhs_quad_order if order is None else order
    points, weights, normals, bary = surface_quadrature(space.mesh, order)
    values = evaluate_on_surface(func, points, normals)
    if not np.all(np.isfinite(values)):
        bad = int(np.nonzero(~np.isfinite(values))[0][0])
        raise AssemblyError(f"boundary data is not finite on triangle {bad}", test_triangle=bad)

    basis = space.basis_values(bary)
    local = np.einsum("tq,tq,qa->ta", values, weights, basis)
    load = np.zeros(space.dof_count, dtype=np.complex128)
    np.add.at(load, space.local2global, local)
    return load


def l2_norm(values: np.ndarray, weights: np.ndarray) -> float:
    """Discrete L2 norm of values sampled at surface quadrature points."""
    return float(np.sqrt(np.sum(weights * np.abs(values) ** 2)))
