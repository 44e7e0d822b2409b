"""Detection of disjoint but close triangle pairs."""
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

from weakbem.config.logging_config import get_logger
from weakbem.geometry.mesh import Mesh

logger = get_logger(__name__)


def is_near_pair(mesh: Mesh, i: int, j: int, factor: float) -> bool:
    """Centroid distance below factor times the larger of the two diameters."""
    distance = float(np.linalg.norm(mesh.centroids[i] - mesh.centroids[j]))
    return distance < factor * max(mesh.diameters[i], mesh.diameters[j])


def near_pairs(mesh: Mesh, factor: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    All ordered disjoint pairs satisfying the near-field criterion.

    Args:
        mesh: Surface mesh
        factor: Near-field factor; 0 disables the near-field treatment

    Returns:
        (rows, cols) sorted by (row, col), each unordered pair listed in both orders
    """
    if factor <= 0.0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()

    tree = cKDTree(mesh.centroids)
    candidates = tree.query_pairs(r=factor * mesh.h_max, output_type="ndarray")
    if candidates.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()

    i, j = candidates[:, 0].astype(np.int64), candidates[:, 1].astype(np.int64)
    distance = np.linalg.norm(mesh.centroids[i] - mesh.centroids[j], axis=1)
    close = distance < factor * np.maximum(mesh.diameters[i], mesh.diameters[j])

    shared = np.asarray(mesh.shared_vertex_counts[i, j]).ravel()
    keep = close & (shared == 0)
    i, j = i[keep], j[keep]

    rows = np.concatenate([i, j])
    cols = np.concatenate([j, i])
    order = np.lexsort((cols, rows))
    logger.debug("Near-field pairs found", n_pairs=int(rows.size), factor=factor)
    return rows[order], cols[order]
