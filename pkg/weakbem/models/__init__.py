"""Data models for the weakbem package."""
from .enums import (
    PairTag,
    SpaceKind,
    OperatorKind,
    PenaltyScaling,
    ExperimentKind,
)
from .reports import MeshStats, SolveReport, ErrorMetric, ResultRow

__all__ = [
    "PairTag",
    "SpaceKind",
    "OperatorKind",
    "PenaltyScaling",
    "ExperimentKind",
    "MeshStats",
    "SolveReport",
    "ErrorMetric",
    "ResultRow",
]
