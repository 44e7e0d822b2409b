"""Experiment configuration: typed model, key = value files and grid construction.

Precedence: built-in defaults < WEAKBEM_* settings < config file < command-line flags.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from weakbem.config.settings import Settings, get_settings
from weakbem.exceptions import ConfigurationError, ContractViolationError
from weakbem.models.enums import ExperimentKind, PenaltyScaling, SpaceKind
from weakbem.operators.spaces import parse_space_kind
from weakbem.quadrature.config import QuadratureConfig

# Resonance location of the real-penalty sweep on the unit sphere.
RESONANT_K = 2.759

_KIND_ALIASES = {kind.value.replace("_", "-"): kind for kind in ExperimentKind}


def parse_experiment_kind(value: Union[str, ExperimentKind]) -> ExperimentKind:
    if isinstance(value, ExperimentKind):
        return value
    key = str(value).strip().lower().replace("_", "-")
    if key not in _KIND_ALIASES:
        raise ConfigurationError(f"unknown experiment '{value}', expected one of {sorted(_KIND_ALIASES)}")
    return _KIND_ALIASES[key]


def parse_space_pair(value: str) -> SpaceKind:
    """Parse 'u:p1,l:p1' or 'u:p1,l:dp0' and return the lambda space kind."""
    parts = {}
    for item in str(value).split(","):
        if ":" not in item:
            raise ConfigurationError(f"space entry '{item}' must look like u:p1 or l:dp0")
        role, kind = (piece.strip().lower() for piece in item.split(":", 1))
        parts[role] = kind
    if set(parts) != {"u", "l"}:
        raise ConfigurationError(f"space must name both u and l, got '{value}'")
    try:
        u_kind = parse_space_kind(parts["u"])
        lambda_kind = parse_space_kind(parts["l"])
    except ContractViolationError as e:
        raise ConfigurationError(str(e)) from e
    if u_kind != SpaceKind.P1_CONTINUOUS:
        raise ConfigurationError("the Dirichlet trace space must be p1")
    if lambda_kind not in (SpaceKind.P1_CONTINUOUS, SpaceKind.DP0):
        raise ConfigurationError("the Neumann trace space must be p1 or dp0")
    return lambda_kind


class ExperimentConfig(BaseModel):
    """One experiment; fully deterministic, no seeds."""
    experiment: ExperimentKind = Field(..., description="solve, sweep_k, sweep_beta_real, sweep_beta_imag or converge")

    # Wavenumbers
    k: Optional[float] = Field(default=None, gt=0.0, description="Wavenumber for single-k experiments")
    k_min: float = Field(default=2.5, gt=0.0, description="First wavenumber of a k sweep")
    k_max: float = Field(default=3.0, gt=0.0, description="Last wavenumber of a k sweep")
    k_step: float = Field(default=0.01, gt=0.0, description="Wavenumber step of a k sweep")

    # Penalty
    beta_re: float = Field(default=1.0, description="Real part of beta_D")
    beta_im: float = Field(default=-1.0, description="Imaginary part of beta_D")
    beta_scaling: PenaltyScaling = Field(default=PenaltyScaling.CONSTANT, description="constant or inverse_h")
    beta_min: float = Field(default=1e-6, gt=0.0, description="Smallest |beta| of a beta sweep")
    beta_max: float = Field(default=1e6, gt=0.0, description="Largest |beta| of a beta sweep")
    beta_count: int = Field(default=25, ge=1, description="Logarithmic points per sign of a beta sweep")

    # Meshes
    level: Optional[int] = Field(default=None, ge=0, description="Icosphere refinement level")
    h_target: float = Field(default=0.25, gt=0.0, description="Target h_max when no level is given")
    levels: List[int] = Field(default_factory=lambda: [1, 2, 3, 4], description="Refinement levels of a convergence study")
    mesh: Optional[Path] = Field(default=None, description="Mesh file replacing the icosphere")

    # Discretisation and solver
    space_lambda: SpaceKind = Field(default=SpaceKind.P1_CONTINUOUS, description="Neumann trace space")
    quad_order: int = Field(default=4, ge=1, le=10, description="Regular triangle rule order")
    singular_order: int = Field(default=4, ge=2, le=20, description="Singular rule points per axis")
    near_field_factor: float = Field(default=2.0, ge=0.0, description="Near-field distance factor")
    gmres_tol: float = Field(default=1e-5, gt=0.0, description="GMRES relative tolerance")
    maxiter: int = Field(default=1000, ge=1, description="GMRES iteration cap")
    threads: int = Field(default=1, ge=1, description="Assembly threads")

    # Output
    out: Optional[Path] = Field(default=None, description="CSV output path (stdout when unset)")
    dump_dir: Optional[Path] = Field(default=None, description="Directory for operator matrix dumps of a solve run")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("experiment", mode="before")
    @classmethod
    def _parse_kind(cls, value):
        return parse_experiment_kind(value)

    @field_validator("space_lambda", mode="before")
    @classmethod
    def _parse_space(cls, value):
        if isinstance(value, str) and ":" in value:
            return parse_space_pair(value)
        try:
            return parse_space_kind(value)
        except ContractViolationError as e:
            raise ValueError(str(e)) from e

    @field_validator("levels", mode="before")
    @classmethod
    def _parse_levels(cls, value):
        if isinstance(value, str):
            return [int(v) for v in value.replace(" ", "").split(",") if v]
        return value

    @model_validator(mode="after")
    def _check_grids(self) -> "ExperimentConfig":
        if self.k_max < self.k_min:
            raise ValueError(f"k_max ({self.k_max}) must not be below k_min ({self.k_min})")
        if self.beta_max < self.beta_min:
            raise ValueError(f"beta_max ({self.beta_max}) must not be below beta_min ({self.beta_min})")
        if not self.levels:
            raise ValueError("levels must not be empty")
        if any(level < 0 for level in self.levels):
            raise ValueError("levels must be nonnegative")
        if len(set(self.levels)) != len(self.levels):
            raise ValueError("levels must be distinct")
        if self.experiment != ExperimentKind.SWEEP_BETA_REAL and not self.beta_re > 0.0:
            raise ValueError(f"Re(beta_D) must be positive, got beta_re={self.beta_re}")
        if self.experiment == ExperimentKind.CONVERGE and self.mesh is not None:
            raise ValueError("a convergence study refines icospheres and cannot use a mesh file")
        return self

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(
            regular_order=self.quad_order,
            singular_order=self.singular_order,
            near_field_factor=self.near_field_factor,
        )

    @property
    def single_k(self) -> float:
        if self.k is not None:
            return self.k
        if self.experiment == ExperimentKind.SWEEP_BETA_REAL:
            return RESONANT_K
        return 3.0

    def k_grid(self) -> List[float]:
        if self.experiment != ExperimentKind.SWEEP_K:
            return [self.single_k]
        count = int(round((self.k_max - self.k_min) / self.k_step)) + 1
        return [round(self.k_min + i * self.k_step, 12) for i in range(count)]

    def beta_grid(self) -> List[complex]:
        if self.experiment == ExperimentKind.SWEEP_BETA_REAL:
            magnitudes = np.logspace(np.log10(self.beta_min), np.log10(self.beta_max), self.beta_count)
            return [complex(float(m), 0.0) for m in magnitudes]
        if self.experiment == ExperimentKind.SWEEP_BETA_IMAG:
            magnitudes = np.logspace(np.log10(self.beta_min), np.log10(self.beta_max), self.beta_count)
            imaginary = np.concatenate([-magnitudes[::-1], magnitudes])
            return [complex(self.beta_re, float(v)) for v in imaginary]
        return [complex(self.beta_re, self.beta_im)]

    def mesh_levels(self) -> List[Optional[int]]:
        """Refinement levels in run order (coarse to fine); None stands for the mesh file."""
        if self.mesh is not None:
            return [None]
        if self.experiment == ExperimentKind.CONVERGE:
            return sorted(self.levels)
        return [self.level] if self.level is not None else []


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse a flat 'key = value' file; '#' starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value'")
        key, value = line.split("=", 1)
        if key.strip() == "space":
            key = "space_lambda"
        values[_normalize_key(key)] = value.strip()
    return values


def settings_defaults(settings: Optional[Settings] = None) -> Dict[str, Any]:
    settings = settings or get_settings()
    return {
        "quad_order": settings.quad_order,
        "singular_order": settings.singular_order,
        "near_field_factor": settings.near_field_factor,
        "gmres_tol": settings.gmres_tol,
        "maxiter": settings.maxiter,
        "threads": settings.threads,
    }


def build_config(
    experiment: Union[str, ExperimentKind, None] = None,
    file_values: Optional[Dict[str, Any]] = None,
    cli_values: Optional[Dict[str, Any]] = None,
    settings: Optional[Settings] = None,
) -> ExperimentConfig:
    """
    Merge settings, config-file values and flags into a validated config.

    Raises:
        ConfigurationError: on unknown keys or invalid values
    """
    merged: Dict[str, Any] = settings_defaults(settings)
    merged.update({_normalize_key(k): v for k, v in (file_values or {}).items()})
    merged.update({_normalize_key(k): v for k, v in (cli_values or {}).items() if v is not None})
    if experiment is not None:
        merged["experiment"] = experiment
    if "experiment" not in merged:
        raise ConfigurationError("no experiment kind given")
    try:
        return ExperimentConfig(**merged)
    except ValidationError as e:
        raise ConfigurationError(f"invalid experiment configuration: {e}") from e
