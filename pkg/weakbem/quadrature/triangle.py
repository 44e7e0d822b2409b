"""Regular quadrature rules on the reference triangle {s, t >= 0, s + t <= 1}."""
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import roots_jacobi

from weakbem.exceptions import QuadratureConfigError

MAX_TRIANGLE_ORDER = 10

REFERENCE_AREA = 0.5


@dataclass(frozen=True, eq=False)
class TriangleRule:
    """Quadrature rule on the reference triangle.

    points are barycentric (l0, l1, l2) with reference coordinates (s, t) = (l1, l2);
    weights sum to the reference area 1/2.
    """
    points: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def reference_points(self) -> np.ndarray:
        """(Q, 2) reference coordinates (s, t)."""
        return self.points[:, 1:]


# Symmetric orbits: (barycentric generator, weight normalised to total 1).
_SYMMETRIC_ORBITS: Dict[int, List[Tuple[Tuple[float, float, float], float]]] = {
    1: [
        ((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), 1.0),
    ],
    2: [
        ((2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0), 1.0 / 3.0),
    ],
    4: [
        ((0.108103018168070, 0.445948490915965, 0.445948490915965), 0.223381589678011),
        ((0.816847572980459, 0.091576213509771, 0.091576213509771), 0.109951743655322),
    ],
    5: [
        ((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), 0.225),
        ((0.059715871789770, 0.470142064105115, 0.470142064105115), 0.132394152788506),
        ((0.797426985353087, 0.101286507323456, 0.101286507323456), 0.125939180544827),
    ],
    6: [
        ((0.501426509658179, 0.249286745170910, 0.249286745170910), 0.116786275726379),
        ((0.873821971016996, 0.063089014491502, 0.063089014491502), 0.050844906370207),
        ((0.053145049844817, 0.310352451033784, 0.636502499121399), 0.082851075618374),
    ],
}
# Order 3 has no positive symmetric rule smaller than the order-4 one.
_SYMMETRIC_ORBITS[3] = _SYMMETRIC_ORBITS[4]


def _symmetric_rule(order: int) -> TriangleRule:
    points = []
    weights = []
    for generator, weight in _SYMMETRIC_ORBITS[order]:
        orbit = sorted(set(permutations(generator)))
        points.extend(orbit)
        weights.extend([weight] * len(orbit))
    points = np.array(points)
    points /= points.sum(axis=1, keepdims=True)
    weights = np.array(weights)
    weights *= REFERENCE_AREA / weights.sum()
    return TriangleRule(points=points, weights=weights, order=order)


def _conical_rule(order: int) -> TriangleRule:
    """Collapsed Gauss-Jacobi x Gauss-Legendre product rule, exact to degree 2n - 1."""
    n = math.ceil((order + 1) / 2)
    x_jac, w_jac = roots_jacobi(n, 1.0, 0.0)
    x_leg, w_leg = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (1.0 + x_jac)
    w_u = 0.25 * w_jac
    v = 0.5 * (1.0 + x_leg)
    w_v = 0.5 * w_leg

    s = np.repeat(u, n)
    t = np.repeat(1.0 - u, n) * np.tile(v, n)
    weights = np.repeat(w_u, n) * np.tile(w_v, n)
    points = np.stack([1.0 - s - t, s, t], axis=1)
    return TriangleRule(points=points, weights=weights, order=order)


@lru_cache(maxsize=None)
def gauss_triangle(order: int) -> TriangleRule:
    """
    Positive-weight triangle rule exact for all polynomials of total degree <= order.

    Args:
        order: Polynomial exactness, 1..10

    Returns:
        TriangleRule with weights summing to 1/2
    """
    if not isinstance(order, (int, np.integer)) or order < 1 or order > MAX_TRIANGLE_ORDER:
        raise QuadratureConfigError(f"triangle rule order must be in 1..{MAX_TRIANGLE_ORDER}, got {order}")
    order = int(order)
    if order in _SYMMETRIC_ORBITS:
        rule = _symmetric_rule(order)
    else:
        rule = _conical_rule(order)
    rule.points.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule
