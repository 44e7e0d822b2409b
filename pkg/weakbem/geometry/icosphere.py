"""Unit-sphere meshes by icosahedral subdivision."""
import math
from functools import lru_cache
from typing import Optional

import numpy as np

from weakbem.config.logging_config import get_logger
from weakbem.config.settings import get_settings
from weakbem.exceptions import CapacityError, ContractViolationError
from weakbem.geometry.mesh import Mesh

logger = get_logger(__name__)

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = np.array([
    [-1.0, _GOLDEN, 0.0],
    [1.0, _GOLDEN, 0.0],
    [-1.0, -_GOLDEN, 0.0],
    [1.0, -_GOLDEN, 0.0],
    [0.0, -1.0, _GOLDEN],
    [0.0, 1.0, _GOLDEN],
    [0.0, -1.0, -_GOLDEN],
    [0.0, 1.0, -_GOLDEN],
    [_GOLDEN, 0.0, -1.0],
    [_GOLDEN, 0.0, 1.0],
    [-_GOLDEN, 0.0, -1.0],
    [-_GOLDEN, 0.0, 1.0],
])

ICOSAHEDRON_TRIANGLES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [5, 4, 9], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
])


def _project(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def _subdivide(vertices: np.ndarray, triangles: np.ndarray):
    """Split every triangle into four through its projected edge midpoints."""
    nv = vertices.shape[0]
    nt = triangles.shape[0]
    edges = np.stack([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]], axis=1)
    sorted_edges = np.sort(edges, axis=2).reshape(-1, 2)
    unique_edges, inverse = np.unique(sorted_edges, axis=0, return_inverse=True)
    midpoint_ids = nv + np.asarray(inverse).reshape(nt, 3)
    midpoints = _project(0.5 * (vertices[unique_edges[:, 0]] + vertices[unique_edges[:, 1]]))

    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    m_ab, m_bc, m_ca = midpoint_ids[:, 0], midpoint_ids[:, 1], midpoint_ids[:, 2]
    children = np.stack([
        np.stack([a, m_ab, m_ca], axis=1),
        np.stack([b, m_bc, m_ab], axis=1),
        np.stack([c, m_ca, m_bc], axis=1),
        np.stack([m_ab, m_bc, m_ca], axis=1),
    ], axis=1).reshape(-1, 3)
    return np.vstack([vertices, midpoints]), children


def _orient_outward(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    corners = vertices[triangles]
    normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    inward = np.einsum("ij,ij->i", normals, corners.mean(axis=1)) < 0.0
    if np.any(inward):
        triangles = triangles.copy()
        triangles[inward] = triangles[inward][:, [0, 2, 1]]
    return triangles


@lru_cache(maxsize=8)
def build_icosphere(refinement_level: int) -> Mesh:
    """
    Icosahedron subdivided refinement_level times, projected onto the unit sphere.

    Args:
        refinement_level: Number of 1-to-4 subdivisions (0 gives the icosahedron)

    Returns:
        Outward oriented Mesh with 20 * 4**refinement_level triangles
    """
    guard = get_settings().max_refinement_level
    if refinement_level < 0:
        raise ContractViolationError(f"refinement level must be nonnegative, got {refinement_level}")
    if refinement_level > guard:
        raise CapacityError(f"refinement level {refinement_level} exceeds the guard of {guard}")

    vertices = _project(ICOSAHEDRON_VERTICES)
    triangles = ICOSAHEDRON_TRIANGLES.copy()
    for _ in range(refinement_level):
        vertices, triangles = _subdivide(vertices, triangles)
    triangles = _orient_outward(vertices, triangles)

    mesh = Mesh.from_arrays(vertices, triangles, sphere_radius=1.0)
    logger.debug(
        "Icosphere built",
        level=refinement_level,
        n_vertices=mesh.n_vertices,
        n_triangles=mesh.n_triangles,
        h_max=mesh.h_max,
    )
    return mesh


def refinement_level_for_h(h_target: float, max_level: Optional[int] = None) -> int:
    """Smallest refinement level whose icosphere has h_max <= h_target."""
    if h_target <= 0.0:
        raise ContractViolationError(f"h target must be positive, got {h_target}")
    max_level = get_settings().max_refinement_level if max_level is None else max_level
    for level in range(max_level + 1):
        if build_icosphere(level).h_max <= h_target:
            return level
    raise CapacityError(f"h target {h_target} needs more than {max_level} refinements")
