"""Sequential execution of experiment grids.

Operators are assembled once per (mesh, k) and shared by every penalty value;
assembly schedules and mass factorizations are shared by every k on a mesh.
"""
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from weakbem.config.logging_config import bind_run_context, clear_run_context, get_logger
from weakbem.exceptions import CapacityError, ConfigurationError, MeshError, WeakBemError
from weakbem.geometry.icosphere import build_icosphere, refinement_level_for_h
from weakbem.geometry.mesh import Mesh
from weakbem.geometry.mesh_io import read_mesh
from weakbem.models.enums import ExperimentKind, SpaceKind
from weakbem.models.reports import ResultRow
from weakbem.operators.matrix_io import write_matrix_dump
from weakbem.operators.spaces import build_space
from weakbem.analytic.errors import fit_loglog_slope, relative_error
from weakbem.analytic.point_source import PointSourceData
from weakbem.formulation.dirichlet import CalderonAssembler, CalderonOperators, build_dirichlet_system, solve_dirichlet
from weakbem.formulation.penalty import PenaltyParameter
from weakbem.experiments.config import ExperimentConfig

logger = get_logger(__name__)


class MeshContext:
    """Spaces, assembly schedules and the last assembled operators of one mesh."""

    def __init__(self, mesh: Mesh, config: ExperimentConfig):
        self.mesh = mesh
        self.space_u = build_space(mesh, SpaceKind.P1_CONTINUOUS)
        if config.space_lambda == SpaceKind.P1_CONTINUOUS:
            self.space_lambda = self.space_u
        else:
            self.space_lambda = build_space(mesh, config.space_lambda)
        self.assembler = CalderonAssembler(self.space_u, self.space_lambda, config.quadrature, config.threads)
        self._cached: Optional[CalderonOperators] = None

    @property
    def n_dofs(self) -> int:
        return self.space_u.dof_count + self.space_lambda.dof_count

    def operators(self, k: float) -> CalderonOperators:
        if self._cached is None or self._cached.k != k:
            self._cached = None
            self._cached = self.assembler.assemble(k)
        return self._cached


def _load_meshes(config: ExperimentConfig) -> List[Mesh]:
    """Build every mesh before any solve so that bad configs fail early."""
    try:
        if config.mesh is not None:
            return [read_mesh(config.mesh)]
        levels = config.mesh_levels() or [refinement_level_for_h(config.h_target)]
        return [build_icosphere(level) for level in levels]
    except (MeshError, CapacityError) as e:
        raise ConfigurationError(f"cannot build the experiment mesh: {e}") from e


def _failed_row(config: ExperimentConfig, k: float, beta: complex, context: MeshContext, elapsed: float) -> ResultRow:
    return ResultRow(
        experiment=config.experiment.value,
        k=k,
        beta_re=beta.real,
        beta_im=beta.imag,
        h=context.mesh.h_max,
        ndofs=context.n_dofs,
        iterations=0,
        converged=False,
        err_u=math.nan,
        err_lambda=math.nan,
        time_s=elapsed,
    )


def _run_point(config: ExperimentConfig, context: MeshContext, k: float, beta: complex) -> ResultRow:
    started = time.perf_counter()
    penalty = PenaltyParameter.from_complex(beta, config.beta_scaling)
    effective = penalty.effective(context.mesh.h_max)
    try:
        data = PointSourceData(k=k)
        system = build_dirichlet_system(
            context.mesh, context.space_u, context.space_lambda, k, penalty, data.dirichlet_trace,
            operators=context.operators(k),
        )
        solution, report = solve_dirichlet(
            system, tol=config.gmres_tol, maxiter=config.maxiter,
            preconditioner=context.assembler.preconditioner,
        )
        errors = relative_error(solution, data.dirichlet_trace, data.neumann_trace, system.beta)
    except (WeakBemError, ArithmeticError, ValueError) as e:
        logger.error("Grid point failed", k=k, beta=str(beta), error=str(e), exc_info=True)
        return _failed_row(config, k, effective, context, time.perf_counter() - started)

    return ResultRow(
        experiment=config.experiment.value,
        k=k,
        beta_re=effective.real,
        beta_im=effective.imag,
        h=context.mesh.h_max,
        ndofs=system.n_dofs,
        iterations=report.iterations,
        converged=report.converged,
        err_u=errors.rel_l2_u,
        err_lambda=errors.rel_l2_lambda,
        time_s=time.perf_counter() - started,
    )


def _dump_operators(config: ExperimentConfig, context: MeshContext, k: float) -> None:
    directory = Path(config.dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    operators = context.operators(k)
    for name, matrix in (("V", operators.V), ("K", operators.K), ("W", operators.W)):
        write_matrix_dump(directory / f"{name}.bin", matrix)
    logger.info("Operator matrices dumped", directory=str(directory))


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    """
    Execute all grid points of an experiment in a fixed order.

    Args:
        config: Validated experiment configuration

    Returns:
        One ResultRow per (mesh, k, beta) combination; failed points are recorded
        as non-converged rows with NaN errors
    """
    meshes = _load_meshes(config)
    k_grid = config.k_grid()
    beta_grid = config.beta_grid()
    logger.info(
        "Experiment started",
        experiment=config.experiment.value,
        n_meshes=len(meshes),
        n_k=len(k_grid),
        n_beta=len(beta_grid),
    )

    rows: List[ResultRow] = []
    bind_run_context(experiment=config.experiment.value)
    try:
        for mesh in sorted(meshes, key=lambda m: -m.h_max):
            bind_run_context(h=mesh.h_max, n_triangles=mesh.n_triangles)
            context = MeshContext(mesh, config)
            for k in k_grid:
                bind_run_context(k=k)
                if config.dump_dir is not None and config.experiment == ExperimentKind.SOLVE:
                    _dump_operators(config, context, k)
                for beta in beta_grid:
                    row = _run_point(config, context, k, beta)
                    logger.info(
                        "Grid point done",
                        beta_re=row.beta_re,
                        beta_im=row.beta_im,
                        iterations=row.iterations,
                        converged=row.converged,
                        err_lambda=row.err_lambda,
                    )
                    rows.append(row)
    finally:
        clear_run_context()
    return rows


def convergence_summary(rows: List[ResultRow]) -> Tuple[Dict[str, float], List[str]]:
    """Fitted log-log slopes of both errors against h, with the matching comment lines."""
    slopes: Dict[str, float] = {}
    for name in ("err_lambda", "err_u"):
        h = [row.h for row in rows if row.converged]
        errors = [getattr(row, name) for row in rows if row.converged]
        try:
            slopes[name] = fit_loglog_slope(h, errors)
        except WeakBemError:
            slopes[name] = math.nan
    lines = [f"slope_{name}={format(value, '.6g')}" for name, value in slopes.items()]
    return slopes, lines
