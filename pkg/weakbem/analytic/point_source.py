"""Manufactured exterior solution: two point sources inside the unit sphere.

g(x) = sum over sources s of exp(ik|r|) / |r| with r = x - s.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from weakbem.exceptions import ContractViolationError, SingularityError

DEFAULT_SOURCES: Tuple[Tuple[float, float, float], ...] = (
    (0.1, 0.5, 0.5),
    (0.1, 0.25, 0.25),
)


def _offsets(x: np.ndarray, sources: np.ndarray):
    x = np.asarray(x, dtype=np.float64)
    r = x[..., None, :] - sources
    distance = np.linalg.norm(r, axis=-1)
    if np.any(distance == 0.0):
        raise SingularityError("field evaluated at a source point")
    return r, distance


def _check_k(k: float) -> None:
    if not k > 0.0:
        raise ContractViolationError(f"wavenumber must be positive, got {k}")


def _scalar(value):
    return complex(value) if np.ndim(value) == 0 else value


def point_source_field(k: float, x: np.ndarray, sources: np.ndarray = None):
    """
    Field value at x (shape (3,) or (N, 3)).

    Returns:
        Complex value(s); a Python complex for a single point
    """
    _check_k(k)
    sources = np.asarray(DEFAULT_SOURCES if sources is None else sources, dtype=np.float64)
    _, distance = _offsets(x, sources)
    return _scalar(np.sum(np.exp(1j * k * distance) / distance, axis=-1))


def point_source_neumann_trace(k: float, x: np.ndarray, n: np.ndarray, sources: np.ndarray = None):
    """Normal derivative sum of (ik|r| - 1) exp(ik|r|) / |r|^3 * r.n at x with unit normal n."""
    _check_k(k)
    sources = np.asarray(DEFAULT_SOURCES if sources is None else sources, dtype=np.float64)
    r, distance = _offsets(x, sources)
    n = np.asarray(n, dtype=np.float64)
    projection = np.einsum("...sd,...d->...s", r, n)
    terms = (1j * k * distance - 1.0) * np.exp(1j * k * distance) / distance ** 3 * projection
    return _scalar(np.sum(terms, axis=-1))


@dataclass(frozen=True)
class PointSourceData:
    """Exact traces of the two-source field at wavenumber k."""
    k: float
    sources: Tuple[Tuple[float, float, float], ...] = DEFAULT_SOURCES

    def __post_init__(self):
        _check_k(self.k)
        if np.any(np.linalg.norm(np.asarray(self.sources), axis=1) >= 1.0):
            raise ContractViolationError("point sources must lie strictly inside the unit sphere")

    @property
    def source_array(self) -> np.ndarray:
        return np.asarray(self.sources, dtype=np.float64)

    def field(self, points: np.ndarray):
        return point_source_field(self.k, points, self.source_array)

    def dirichlet_trace(self, points: np.ndarray, normals: np.ndarray) -> np.ndarray:
        """Boundary function g_D(points, normals)."""
        return np.asarray(point_source_field(self.k, points, self.source_array))

    def neumann_trace(self, points: np.ndarray, normals: np.ndarray) -> np.ndarray:
        """Boundary function for the exact flux."""
        return np.asarray(point_source_neumann_trace(self.k, points, normals, self.source_array))
