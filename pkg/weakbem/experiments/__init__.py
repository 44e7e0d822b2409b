"""Experiment harness: configuration, sequential grid runs and CSV results."""

from weakbem.experiments.config import (
    RESONANT_K,
    ExperimentConfig,
    build_config,
    parse_experiment_kind,
    parse_space_pair,
    read_config_file,
)
from weakbem.experiments.runner import MeshContext, convergence_summary, run_experiment
from weakbem.experiments.results_io import HEADER, format_results, read_results, write_results

__all__ = [
    # Config
    "RESONANT_K",
    "ExperimentConfig",
    "build_config",
    "parse_experiment_kind",
    "parse_space_pair",
    "read_config_file",
    # Runs
    "MeshContext",
    "run_experiment",
    "convergence_summary",
    # Results
    "HEADER",
    "format_results",
    "read_results",
    "write_results",
]
