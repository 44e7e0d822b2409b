"""Surface meshes: generation, adjacency classification and file exchange."""

from weakbem.geometry.mesh import (
    Mesh,
    PairClass,
    classify_pair,
    mesh_stats,
)
from weakbem.geometry.icosphere import build_icosphere, refinement_level_for_h
from weakbem.geometry.mesh_io import read_mesh, write_mesh

__all__ = [
    "Mesh",
    "PairClass",
    "classify_pair",
    "mesh_stats",
    "build_icosphere",
    "refinement_level_for_h",
    "read_mesh",
    "write_mesh",
]
