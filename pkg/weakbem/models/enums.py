"""Enumeration types for the weakbem package."""
from enum import Enum


class PairTag(str, Enum):
    """How two triangles of a mesh touch."""
    COINCIDENT = "coincident"
    EDGE_ADJACENT = "edge_adjacent"
    VERTEX_ADJACENT = "vertex_adjacent"
    DISJOINT = "disjoint"


class SpaceKind(str, Enum):
    """Discrete trace spaces."""
    P1_CONTINUOUS = "P1_continuous"
    DP0 = "DP0"
    DP1 = "DP1"


class OperatorKind(str, Enum):
    """Boundary integral operators of the Calderon system."""
    V = "V"
    K = "K"
    KADJ = "Kadj"
    W = "W"


class PenaltyScaling(str, Enum):
    """How the base penalty value depends on the mesh."""
    CONSTANT = "constant"
    INVERSE_H = "inverse_h"


class ExperimentKind(str, Enum):
    """Experiments reproduced by the CLI."""
    SOLVE = "solve"
    SWEEP_K = "sweep_k"
    SWEEP_BETA_REAL = "sweep_beta_real"
    SWEEP_BETA_IMAG = "sweep_beta_imag"
    CONVERGE = "converge"
