"""Nodal interpolation of exact traces into the discrete spaces."""
import numpy as np

from weakbem.exceptions import ContractViolationError
from weakbem.geometry.mesh import Mesh
from weakbem.models.enums import SpaceKind
from weakbem.operators.projection import BoundaryFunction
from weakbem.operators.spaces import DofSpace
from weakbem.formulation.dirichlet import TraceSolution


def interpolate(space: DofSpace, func: BoundaryFunction) -> np.ndarray:
    """
    Coefficients of the nodal interpolant of func.

    P1 at the vertices, DP1 at each triangle's corners, DP0 at centroids; normals
    come from the surface the mesh approximates.
    """
    mesh = space.mesh
    if space.kind == SpaceKind.P1_CONTINUOUS:
        values = func(mesh.vertices, mesh.vertex_normals)
    elif space.kind == SpaceKind.DP0:
        ids = np.arange(mesh.n_triangles)
        values = func(mesh.centroids, mesh.surface_normals(mesh.centroids, ids))
    else:
        corners = mesh.triangles.ravel()
        values = func(mesh.vertices[corners], mesh.vertex_normals[corners])
    values = np.asarray(values, dtype=np.complex128).ravel()
    if values.size != space.dof_count:
        raise ContractViolationError(f"interpolation produced {values.size} values for {space.dof_count} dofs")
    return values


def interpolate_traces(
    mesh: Mesh,
    space_u: DofSpace,
    space_lambda: DofSpace,
    exact_u: BoundaryFunction,
    exact_lambda: BoundaryFunction,
    k: float,
    beta: complex = 0j,
) -> TraceSolution:
    """Interpolated exact traces packaged as a TraceSolution."""
    if space_u.mesh is not mesh or space_lambda.mesh is not mesh:
        raise ContractViolationError("spaces do not live on the given mesh")
    return TraceSolution(
        u_coeffs=interpolate(space_u, exact_u),
        lambda_coeffs=interpolate(space_lambda, exact_lambda),
        space_u=space_u,
        space_lambda=space_lambda,
        k=float(k),
        beta=complex(beta),
    )
