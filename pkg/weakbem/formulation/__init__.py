"""Weak Dirichlet formulation: penalty, blocked system, solve and field reconstruction."""

from weakbem.formulation.penalty import PenaltyParameter, check_penalty_hypothesis
from weakbem.formulation.dirichlet import (
    BlockedDirichletSystem,
    CalderonAssembler,
    CalderonOperators,
    TraceSolution,
    build_dirichlet_system,
    calderon_residual,
    dirichlet_load_vector,
    dirichlet_residual,
    solve_dirichlet,
)
from weakbem.formulation.interpolation import interpolate, interpolate_traces
from weakbem.formulation.representation import FieldEvaluation, evaluate_representation

__all__ = [
    # Penalty
    "PenaltyParameter",
    "check_penalty_hypothesis",
    # System
    "BlockedDirichletSystem",
    "CalderonAssembler",
    "CalderonOperators",
    "TraceSolution",
    "build_dirichlet_system",
    "dirichlet_load_vector",
    "solve_dirichlet",
    # Consistency checks
    "dirichlet_residual",
    "calderon_residual",
    # Traces and fields
    "interpolate",
    "interpolate_traces",
    "FieldEvaluation",
    "evaluate_representation",
]
