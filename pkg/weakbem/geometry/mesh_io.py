"""Plain-text triangle mesh import/export.

Format: line 1 ``nv nt``, then nv lines ``x y z``, then nt lines ``i j k``
(0-based vertex indices).
"""
from pathlib import Path
from typing import Optional, Union

import numpy as np

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import MeshError
from weakbem.geometry.mesh import Mesh

logger = get_logger(__name__)


def write_mesh(mesh: Mesh, path: Union[str, Path]) -> None:
    """Write a mesh in the text format."""
    path = Path(path)
    lines = [f"{mesh.n_vertices} {mesh.n_triangles}"]
    lines.extend(f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices)
    lines.extend(f"{i} {j} {k}" for i, j, k in mesh.triangles)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise MeshError(f"cannot write mesh file {path}: {e}") from e
    logger.info("Mesh written", path=str(path), n_triangles=mesh.n_triangles)


def read_mesh(path: Union[str, Path], sphere_radius: Optional[float] = None) -> Mesh:
    """
    Read a mesh in the text format.

    Args:
        path: Mesh file
        sphere_radius: Set when the file describes an origin-centred sphere,
            to evaluate exact normals for analytic traces

    Returns:
        Validated Mesh
    """
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise MeshError(f"cannot read mesh file {path}: {e}") from e

    lines = [(number, line.split()) for number, line in enumerate(raw_lines, start=1) if line.strip()]
    if not lines:
        raise MeshError(f"{path}: empty mesh file")

    header_line, header = lines[0]
    try:
        nv, nt = (int(v) for v in header)
    except ValueError:
        raise MeshError(f"{path}:{header_line}: header must be 'nv nt'")
    if len(lines) != 1 + nv + nt:
        raise MeshError(f"{path}: expected {nv} vertex and {nt} triangle lines, found {len(lines) - 1} data lines")

    vertices = np.empty((nv, 3))
    triangles = np.empty((nt, 3), dtype=np.int64)
    for row, (number, fields) in enumerate(lines[1:1 + nv]):
        try:
            vertices[row] = [float(v) for v in fields]
        except ValueError:
            raise MeshError(f"{path}:{number}: vertex line must hold three numbers")
    for row, (number, fields) in enumerate(lines[1 + nv:]):
        try:
            triangles[row] = [int(v) for v in fields]
        except ValueError:
            raise MeshError(f"{path}:{number}: triangle line must hold three integer indices")

    mesh = Mesh.from_arrays(vertices, triangles, sphere_radius=sphere_radius)
    logger.info("Mesh read", path=str(path), n_vertices=nv, n_triangles=nt, h_max=mesh.h_max)
    return mesh
