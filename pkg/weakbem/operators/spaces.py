"""Discrete trace spaces on a triangle mesh.

P1_continuous: one dof per vertex, hat functions.
DP0: one dof per triangle, constant.
DP1: three dofs per triangle, barycentric coordinates restricted to the triangle.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import ContractViolationError
from weakbem.geometry.mesh import Mesh
from weakbem.models.enums import SpaceKind

logger = get_logger(__name__)

_SPACE_ALIASES = {
    "p1": SpaceKind.P1_CONTINUOUS,
    "p1_continuous": SpaceKind.P1_CONTINUOUS,
    "dp0": SpaceKind.DP0,
    "dp1": SpaceKind.DP1,
}


def parse_space_kind(value: Union[str, SpaceKind]) -> SpaceKind:
    """Accept enum values and the short names p1, dp0, dp1 (case-insensitive)."""
    if isinstance(value, SpaceKind):
        return value
    try:
        return _SPACE_ALIASES[str(value).strip().lower()]
    except KeyError:
        raise ContractViolationError(f"unknown space kind '{value}', expected one of p1, dp0, dp1")


@dataclass(frozen=True, eq=False)
class DofSpace:
    """Scalar trace space with a per-triangle local-to-global map."""
    kind: SpaceKind
    mesh: Mesh
    dof_count: int
    local2global: np.ndarray

    @property
    def local_size(self) -> int:
        return int(self.local2global.shape[1])

    @property
    def is_continuous(self) -> bool:
        return self.kind == SpaceKind.P1_CONTINUOUS

    def basis_values(self, barycentric: np.ndarray) -> np.ndarray:
        """Local basis values (Q, local_size) at barycentric points (Q, 3)."""
        barycentric = np.asarray(barycentric, dtype=np.float64)
        if self.local_size == 1:
            return np.ones((barycentric.shape[0], 1))
        return barycentric.copy()

    @cached_property
    def surface_curls(self) -> np.ndarray:
        """
        Surface curls of the local basis, shape (nt, 3, 3).

        For the barycentric function of vertex m on a flat triangle the curl is the
        constant vector (P[m+1] - P[m+2]) / (2 * area).
        """
        if self.local_size != 3:
            raise ContractViolationError(f"surface curls need a piecewise linear space, got {self.kind.value}")
        corners = self.mesh.vertices[self.mesh.triangles]
        doubled = (2.0 * self.mesh.areas)[:, None]
        curls = np.stack([
            (corners[:, (m + 1) % 3] - corners[:, (m + 2) % 3]) / doubled for m in range(3)
        ], axis=1)
        curls.setflags(write=False)
        return curls


def build_space(mesh: Mesh, kind: Union[str, SpaceKind]) -> DofSpace:
    """
    Build a trace space on a mesh.

    Args:
        mesh: Surface mesh
        kind: P1_continuous, DP0 or DP1 (short names p1, dp0, dp1 accepted)

    Returns:
        DofSpace with a deterministic local-to-global map
    """
    kind = parse_space_kind(kind)
    nt = mesh.n_triangles
    if kind == SpaceKind.P1_CONTINUOUS:
        local2global = mesh.triangles.copy()
        dof_count = mesh.n_vertices
    elif kind == SpaceKind.DP0:
        local2global = np.arange(nt, dtype=np.int64)[:, None]
        dof_count = nt
    else:
        local2global = np.arange(3 * nt, dtype=np.int64).reshape(nt, 3)
        dof_count = 3 * nt
    local2global.setflags(write=False)
    logger.debug("Space built", kind=kind.value, dof_count=dof_count)
    return DofSpace(kind=kind, mesh=mesh, dof_count=dof_count, local2global=local2global)


def check_same_mesh(*spaces: DofSpace) -> Mesh:
    """Return the common mesh of the given spaces."""
    mesh = spaces[0].mesh
    for space in spaces[1:]:
        if space.mesh is not mesh:
            raise ContractViolationError("trial and test spaces live on different meshes")
    return mesh
