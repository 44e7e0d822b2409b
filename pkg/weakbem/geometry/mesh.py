"""Triangulated closed surfaces and triangle-pair adjacency.

A Mesh is immutable after construction: every array is flagged read-only, so
the same instance can be shared by assembly workers without locking.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import MeshError
from weakbem.models.enums import PairTag
from weakbem.models.reports import MeshStats

logger = get_logger(__name__)

NORMAL_TOLERANCE = 1e-12

_TAG_BY_SHARED_COUNT = {
    3: PairTag.COINCIDENT,
    2: PairTag.EDGE_ADJACENT,
    1: PairTag.VERTEX_ADJACENT,
    0: PairTag.DISJOINT,
}


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PairClass:
    """Adjacency of an ordered triangle pair (i, j).

    shared_vertices holds (local index in i, local index in j) for every shared
    vertex, sorted by the local index in triangle i.
    """
    tag: PairTag
    shared_vertices: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True, eq=False)
class Mesh:
    """Flat-triangle surface mesh with outward oriented triangles."""
    vertices: np.ndarray
    triangles: np.ndarray
    normals: np.ndarray
    areas: np.ndarray
    diameters: np.ndarray
    centroids: np.ndarray
    h_max: float
    sphere_radius: Optional[float] = None

    @classmethod
    def from_arrays(
        cls,
        vertices: np.ndarray,
        triangles: np.ndarray,
        sphere_radius: Optional[float] = None,
        require_closed: bool = True,
    ) -> "Mesh":
        """
        Build a mesh and check its invariants.

        Args:
            vertices: (nv, 3) coordinates
            triangles: (nt, 3) vertex indices, counter-clockwise seen from outside
            sphere_radius: Radius of the origin-centred sphere the mesh approximates, if any.
                Enables exact smooth normals for traces of analytic fields.
            require_closed: Check that every edge is shared by exactly two
                oppositely traversed triangles. Only open test fixtures disable this.

        Returns:
            Validated Mesh
        """
        vertices = np.array(vertices, dtype=np.float64)
        triangles = np.array(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise MeshError(f"vertices must have shape (nv, 3), got {vertices.shape}")
        if triangles.ndim != 2 or triangles.shape[1] != 3 or triangles.shape[0] == 0:
            raise MeshError(f"triangles must have shape (nt, 3), got {triangles.shape}")
        if triangles.min() < 0 or triangles.max() >= vertices.shape[0]:
            raise MeshError("triangle vertex index out of range")

        corners = vertices[triangles]
        cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
        doubled = np.linalg.norm(cross, axis=1)
        if np.any(doubled <= 0.0):
            bad = int(np.argmin(doubled))
            raise MeshError(f"triangle {bad} has non-positive area")
        normals = cross / doubled[:, None]

        edge_lengths = np.stack([
            np.linalg.norm(corners[:, 1] - corners[:, 0], axis=1),
            np.linalg.norm(corners[:, 2] - corners[:, 1], axis=1),
            np.linalg.norm(corners[:, 0] - corners[:, 2], axis=1),
        ], axis=1)
        diameters = edge_lengths.max(axis=1)

        if require_closed:
            _check_closed_orientable(triangles)

        return cls(
            vertices=_frozen(vertices),
            triangles=_frozen(triangles),
            normals=_frozen(normals),
            areas=_frozen(0.5 * doubled),
            diameters=_frozen(diameters),
            centroids=_frozen(corners.mean(axis=1)),
            h_max=float(diameters.max()),
            sphere_radius=sphere_radius,
        )

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """(nt, nv) triangle-vertex incidence matrix."""
        rows = np.repeat(np.arange(self.n_triangles), 3)
        data = np.ones(rows.size, dtype=np.int64)
        return sp.csr_matrix((data, (rows, self.triangles.ravel())), shape=(self.n_triangles, self.n_vertices))

    @cached_property
    def shared_vertex_counts(self) -> sp.csr_matrix:
        """(nt, nt) matrix whose entry (i, j) counts vertices shared by triangles i and j."""
        shared = (self.incidence @ self.incidence.T).tocsr()
        shared.sort_indices()
        return shared

    def touching_pairs(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All ordered pairs sharing at least one vertex, sorted by (i, j), with shared counts."""
        coo = self.shared_vertex_counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return coo.row[order].astype(np.int64), coo.col[order].astype(np.int64), coo.data[order].astype(np.int64)

    def surface_normals(self, points: np.ndarray, triangle_ids: np.ndarray) -> np.ndarray:
        """Unit normals of the surface the mesh represents, at points lying on given triangles."""
        if self.sphere_radius is not None:
            points = np.asarray(points, dtype=np.float64)
            return points / np.linalg.norm(points, axis=-1, keepdims=True)
        return self.normals[np.asarray(triangle_ids)]

    @cached_property
    def vertex_normals(self) -> np.ndarray:
        """Unit normals at the vertices (exact for spheres, area-weighted otherwise)."""
        if self.sphere_radius is not None:
            normals = self.vertices / np.linalg.norm(self.vertices, axis=1, keepdims=True)
        else:
            weighted = self.normals * self.areas[:, None]
            summed = np.zeros_like(self.vertices)
            for corner in range(3):
                np.add.at(summed, self.triangles[:, corner], weighted)
            normals = summed / np.linalg.norm(summed, axis=1, keepdims=True)
        return _frozen(normals)


def _check_closed_orientable(triangles: np.ndarray) -> None:
    """Every directed edge must occur once and its reverse exactly once."""
    directed = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    unique, counts = np.unique(directed, axis=0, return_counts=True)
    if np.any(counts > 1):
        raise MeshError("mesh is not consistently oriented: a directed edge is traversed twice")
    reverse = np.unique(directed[:, ::-1], axis=0)
    if unique.shape != reverse.shape or not np.array_equal(unique, reverse):
        raise MeshError("mesh is not closed: some edge is not shared by exactly two triangles")


def classify_pair(mesh: Mesh, i: int, j: int) -> PairClass:
    """Classify triangles i and j by the number of vertices they share."""
    n = mesh.n_triangles
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"triangle index out of range: ({i}, {j}) for {n} triangles")
    tri_i = mesh.triangles[i]
    tri_j = mesh.triangles[j]
    shared = []
    for local_i in range(3):
        matches = np.nonzero(tri_j == tri_i[local_i])[0]
        if matches.size:
            shared.append((local_i, int(matches[0])))
    return PairClass(tag=_TAG_BY_SHARED_COUNT[len(shared)], shared_vertices=tuple(shared))


def mesh_stats(mesh: Mesh) -> MeshStats:
    """Resolution summary used in every experiment output."""
    return MeshStats(
        h_max=mesh.h_max,
        min_area=float(mesh.areas.min()),
        total_area=float(mesh.areas.sum()),
        n_vertices=mesh.n_vertices,
        n_triangles=mesh.n_triangles,
    )
