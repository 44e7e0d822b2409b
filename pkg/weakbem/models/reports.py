"""Result models shared by the solver, the error metrics and the experiment harness."""
from typing import List

from pydantic import BaseModel, Field


class MeshStats(BaseModel):
    """Size and resolution summary of a mesh."""
    h_max: float = Field(..., gt=0.0, description="Largest element diameter (longest edge)")
    min_area: float = Field(..., gt=0.0, description="Smallest triangle area")
    total_area: float = Field(..., gt=0.0, description="Sum of triangle areas")
    n_vertices: int = Field(..., ge=3, description="Number of vertices")
    n_triangles: int = Field(..., ge=1, description="Number of triangles")


class SolveReport(BaseModel):
    """
    Outcome of one GMRES solve.

    A zero initial residual is reported as history [1.0] with 0 iterations.
    """
    iterations: int = Field(default=0, ge=0, description="Arnoldi steps taken")
    residual_history: List[float] = Field(
        default_factory=list,
        description="Relative preconditioned residual after each step, starting with the initial one"
    )
    converged: bool = Field(default=False, description="Whether the tolerance was reached")
    tolerance: float = Field(default=1e-5, gt=0.0, description="Requested relative tolerance")
    wall_time: float = Field(default=0.0, ge=0.0, description="Seconds spent in the solve")

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")


class ErrorMetric(BaseModel):
    """L2(Gamma) surrogate errors of a trace solution against exact traces."""
    rel_l2_u: float = Field(..., ge=0.0, description="Relative L2 error of the Dirichlet trace")
    rel_l2_lambda: float = Field(..., ge=0.0, description="Relative L2 error of the Neumann trace")
    penalty_l2_u: float = Field(
        ..., ge=0.0,
        description="|beta_D|^(1/2)-weighted Dirichlet misfit, relative to the exact Dirichlet norm"
    )
    b_norm: float = Field(..., ge=0.0, description="Relative B_D-norm surrogate error")
    absolute: bool = Field(
        default=False,
        description="True when an exact norm vanished and absolute errors were returned instead"
    )


class ResultRow(BaseModel):
    """One grid point of an experiment, as written to the results CSV."""
    experiment: str = Field(..., description="Experiment kind")
    k: float = Field(..., description="Wavenumber")
    beta_re: float = Field(..., description="Real part of the effective beta_D")
    beta_im: float = Field(..., description="Imaginary part of the effective beta_D")
    h: float = Field(..., description="Achieved h_max of the mesh")
    ndofs: int = Field(..., ge=0, description="Total unknowns (u and lambda)")
    iterations: int = Field(..., ge=0, description="GMRES iterations")
    converged: bool = Field(..., description="Whether GMRES reached the tolerance")
    err_u: float = Field(..., description="Relative L2 error of the Dirichlet trace (NaN on failure)")
    err_lambda: float = Field(..., description="Relative L2 error of the Neumann trace (NaN on failure)")
    time_s: float = Field(..., ge=0.0, description="Wall time of the grid point in seconds")
