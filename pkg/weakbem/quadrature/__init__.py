"""Regular and singular quadrature on triangles and triangle pairs."""

from weakbem.quadrature.triangle import TriangleRule, gauss_triangle
from weakbem.quadrature.singular import PairRule, singular_rule, tensor_rule
from weakbem.quadrature.near_field import is_near_pair, near_pairs
from weakbem.quadrature.config import QuadratureConfig

__all__ = [
    # Rules
    "TriangleRule",
    "gauss_triangle",
    "PairRule",
    "singular_rule",
    "tensor_rule",
    # Near field
    "is_near_pair",
    "near_pairs",
    # Config
    "QuadratureConfig",
]
