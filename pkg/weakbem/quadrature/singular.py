"""Triangle-pair rules, including regularizing transforms for touching pairs.

Touching pairs use the Sauter-Schwab relative-coordinate transforms of the
four-dimensional integration domain. Both triangles are parametrised over the
simplex {0 <= x2 <= x1 <= 1}; a point maps to reference coordinates
(s, t) = (x1 - x2, x2). The shared vertex sits at reference vertex 0, a shared
edge runs from reference vertex 0 to reference vertex 1 in both triangles.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Tuple

import numpy as np

from weakbem.exceptions import ContractViolationError, QuadratureConfigError
from weakbem.models.enums import PairTag
from weakbem.quadrature.triangle import TriangleRule

MAX_SINGULAR_ORDER = 20

SUBREGION_COUNTS = {
    PairTag.COINCIDENT: 6,
    PairTag.EDGE_ADJACENT: 5,
    PairTag.VERTEX_ADJACENT: 2,
}

# (xi, eta1, eta2, eta3) -> (x1, x2, y1, y2, jacobian)
_Transform = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], Tuple[np.ndarray, ...]]


@dataclass(frozen=True, eq=False)
class PairRule:
    """Rule on the product of two reference triangles.

    points rows are (s_x, t_x, s_y, t_y); weights sum to 1/4.
    """
    points: np.ndarray
    weights: np.ndarray
    tag: PairTag

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def barycentric(self) -> Tuple[np.ndarray, np.ndarray]:
        """Barycentric coordinates on the first and on the second triangle."""
        s_x, t_x, s_y, t_y = self.points.T
        bary_x = np.stack([1.0 - s_x - t_x, s_x, t_x], axis=1)
        bary_y = np.stack([1.0 - s_y - t_y, s_y, t_y], axis=1)
        return bary_x, bary_y


def _coincident_transforms() -> List[_Transform]:
    def r1(xi, e1, e2, e3):
        return xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1)

    def r2(xi, e1, e2, e3):
        return xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2)

    def r3(xi, e1, e2, e3):
        return xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2)

    def r4(xi, e1, e2, e3):
        return xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3)

    def r5(xi, e1, e2, e3):
        return xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2)

    def r6(xi, e1, e2, e3):
        return xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3)

    def jacobian(xi, e1, e2, e3):
        return xi ** 3 * e1 ** 2 * e2

    return [(r, jacobian) for r in (r1, r2, r3, r4, r5, r6)]


def _edge_transforms() -> List[_Transform]:
    def r1(xi, e1, e2, e3):
        return xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2)

    def r2(xi, e1, e2, e3):
        return xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3)

    def r3(xi, e1, e2, e3):
        return xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3

    def r4(xi, e1, e2, e3):
        return xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1

    def r5(xi, e1, e2, e3):
        return xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2

    def first_jacobian(xi, e1, e2, e3):
        return xi ** 3 * e1 ** 2

    def jacobian(xi, e1, e2, e3):
        return xi ** 3 * e1 ** 2 * e2

    return [(r1, first_jacobian)] + [(r, jacobian) for r in (r2, r3, r4, r5)]


def _vertex_transforms() -> List[_Transform]:
    def r1(xi, e1, e2, e3):
        return xi, xi * e1, xi * e2, xi * e2 * e3

    def r2(xi, e1, e2, e3):
        return xi * e2, xi * e2 * e3, xi, xi * e1

    def jacobian(xi, e1, e2, e3):
        return xi ** 3 * e2

    return [(r1, jacobian), (r2, jacobian)]


_TRANSFORMS = {
    PairTag.COINCIDENT: _coincident_transforms,
    PairTag.EDGE_ADJACENT: _edge_transforms,
    PairTag.VERTEX_ADJACENT: _vertex_transforms,
}


def _gauss_legendre_unit(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (1.0 + x), 0.5 * w


@lru_cache(maxsize=None)
def singular_rule(tag: PairTag, order: int) -> PairRule:
    """
    Regularizing rule for a touching triangle pair.

    Args:
        tag: coincident, edge_adjacent or vertex_adjacent
        order: Gauss-Legendre points per axis of the unit 4-cube (>= 2)

    Returns:
        PairRule with order**4 points per subregion and weights summing to 1/4
    """
    tag = PairTag(tag)
    if tag == PairTag.DISJOINT:
        raise ContractViolationError("disjoint pairs use tensor_rule, not singular_rule")
    if order < 2 or order > MAX_SINGULAR_ORDER:
        raise QuadratureConfigError(f"singular order must be in 2..{MAX_SINGULAR_ORDER}, got {order}")

    nodes, node_weights = _gauss_legendre_unit(int(order))
    grids = np.meshgrid(nodes, nodes, nodes, nodes, indexing="ij")
    xi, e1, e2, e3 = (g.ravel() for g in grids)
    grid_weights = np.einsum(
        "i,j,k,l->ijkl", node_weights, node_weights, node_weights, node_weights
    ).ravel()

    points = []
    weights = []
    for transform, jacobian in _TRANSFORMS[tag]():
        x1, x2, y1, y2 = transform(xi, e1, e2, e3)
        points.append(np.stack([x1 - x2, x2, y1 - y2, y2], axis=1))
        weights.append(grid_weights * jacobian(xi, e1, e2, e3))
    rule = PairRule(points=np.concatenate(points), weights=np.concatenate(weights), tag=tag)
    rule.points.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule


def tensor_rule(rule_x: TriangleRule, rule_y: TriangleRule) -> PairRule:
    """Product rule for disjoint pairs."""
    nx, ny = rule_x.size, rule_y.size
    ref_x = np.repeat(rule_x.reference_points, ny, axis=0)
    ref_y = np.tile(rule_y.reference_points, (nx, 1))
    weights = np.repeat(rule_x.weights, ny) * np.tile(rule_y.weights, nx)
    return PairRule(points=np.hstack([ref_x, ref_y]), weights=weights, tag=PairTag.DISJOINT)
