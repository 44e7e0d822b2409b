"""Exterior field from its traces: u(x) = (double layer of u)(x) - (single layer of lambda)(x)."""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial import cKDTree

from weakbem.config.logging_config import get_logger
from weakbem.operators.potentials import double_layer_potential, single_layer_potential
from weakbem.formulation.dirichlet import TraceSolution

logger = get_logger(__name__)


class FieldEvaluation(BaseModel):
    """Field values with a per-point accuracy warning flag."""
    values: np.ndarray = Field(..., description="Complex field values, one per point")
    near_surface: np.ndarray = Field(
        ..., description="True where the point lies within one element diameter of the surface"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def has_warnings(self) -> bool:
        return bool(np.any(self.near_surface))


def _near_surface(solution: TraceSolution, points: np.ndarray) -> np.ndarray:
    """Distance to the closest vertex or centroid below h_max."""
    mesh = solution.mesh
    tree = cKDTree(np.vstack([mesh.vertices, mesh.centroids]))
    distance, _ = tree.query(points)
    return distance < mesh.h_max


def evaluate_representation(solution: TraceSolution, points: np.ndarray, order: Optional[int] = None) -> FieldEvaluation:
    """
    Evaluate the representation formula at points off the surface.

    Args:
        solution: Trace coefficients (u, lambda) and their spaces
        points: (P, 3) evaluation points
        order: Triangle rule order for the potentials (defaults from settings)

    Returns:
        FieldEvaluation; points closer than one element diameter are flagged
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    near = _near_surface(solution, points)
    if np.any(near):
        logger.warning(
            "Field evaluated close to the surface, accuracy degraded",
            n_points=int(near.sum()),
            h_max=solution.mesh.h_max,
        )
    values = (
        double_layer_potential(solution.space_u, solution.u_coeffs, points, solution.k, order)
        - single_layer_potential(solution.space_lambda, solution.lambda_coeffs, points, solution.k, order)
    )
    return FieldEvaluation(values=values, near_surface=near)
