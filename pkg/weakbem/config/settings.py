"""Library and CLI settings loaded from environment variables."""
from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults, overridable through WEAKBEM_* variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="WEAKBEM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: Optional[str] = Field(default=None, description="Optional JSON log file name, written under ./tmp/")

    # Quadrature
    quad_order: int = Field(default=4, description="Polynomial order of the regular triangle rule")
    singular_order: int = Field(default=4, description="Gauss points per axis of the singular pair rules")
    near_field_factor: float = Field(
        default=2.0,
        description="Disjoint pairs closer than this factor times the larger diameter get a doubled regular order"
    )
    rhs_quad_order: int = Field(default=6, description="Triangle rule order for right-hand sides and error norms")
    potential_quad_order: int = Field(default=6, description="Triangle rule order for off-surface potentials")

    # Krylov solver
    gmres_tol: float = Field(default=1e-5, description="Relative tolerance on the preconditioned residual")
    maxiter: int = Field(default=1000, description="Maximum GMRES iterations (no restart)")

    # Execution
    threads: int = Field(default=1, description="Worker threads used by operator assembly")
    assembly_chunk_size: int = Field(default=32, description="Test triangles per regular assembly work unit")
    singular_batch_size: int = Field(default=1024, description="Triangle pairs per singular assembly work unit")

    # Mesh guard
    max_refinement_level: int = Field(default=7, description="Largest icosphere refinement level accepted")


@lru_cache
def get_settings() -> Settings:
    """Get cached settings."""
    return Settings()
