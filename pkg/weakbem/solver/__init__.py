"""Blocked operators, mass-matrix preconditioning and GMRES."""

from weakbem.solver.block_operator import BlockOperator, OperatorBlock
from weakbem.solver.preconditioner import MassFactor, Preconditioner, build_preconditioner
from weakbem.solver.gmres import gmres_solve, true_relative_residual

__all__ = [
    "BlockOperator",
    "OperatorBlock",
    "MassFactor",
    "Preconditioner",
    "build_preconditioner",
    "gmres_solve",
    "true_relative_residual",
]
