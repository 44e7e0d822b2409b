"""Weak Dirichlet problem on the Calderon system with a complex penalty.

Unknowns are the exterior traces (u, lambda). Block row 0 is tested with v in
the u space, block row 1 with mu in the lambda space:

    [ W + beta M_uu        K' + 1/2 M_ul ] [u     ]   [  beta <g, v> ]
    [ -K - 1/2 M_lu        V             ] [lambda] = [ -<g, mu>     ]

K' is the transpose of the K block (test lambda, trial u). Every basis
function is real, so conj(beta) in the right-hand side pairing turns into
beta on the coefficient vector.
"""
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from weakbem.config.logging_config import get_logger
from weakbem.config.settings import get_settings
from weakbem.exceptions import ContractViolationError
from weakbem.geometry.mesh import Mesh
from weakbem.models.enums import OperatorKind, SpaceKind
from weakbem.models.reports import SolveReport
from weakbem.operators.assembly import OperatorAssembler
from weakbem.operators.mass import MassMatrix, assemble_mass
from weakbem.operators.projection import BoundaryFunction, integrate_against_basis
from weakbem.operators.spaces import DofSpace, check_same_mesh
from weakbem.quadrature.config import QuadratureConfig
from weakbem.solver.block_operator import BlockOperator, OperatorBlock
from weakbem.solver.gmres import gmres_solve
from weakbem.solver.preconditioner import Preconditioner, build_preconditioner
from weakbem.formulation.penalty import PenaltyParameter, check_penalty_hypothesis

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class CalderonOperators:
    """Galerkin blocks of the Calderon system at one wavenumber, plus the mass matrices."""
    k: float
    space_u: DofSpace
    space_lambda: DofSpace
    V: np.ndarray
    K: np.ndarray
    W: np.ndarray
    mass_uu: MassMatrix
    mass_ll: MassMatrix
    mass_ul: MassMatrix
    mass_lu: MassMatrix

    @property
    def Kadj(self) -> np.ndarray:
        """Adjoint double layer block (test u, trial lambda)."""
        return self.K.T

    def conjugate(self) -> "CalderonOperators":
        """Blocks of the conjugated system; mass matrices are real."""
        return CalderonOperators(
            k=self.k, space_u=self.space_u, space_lambda=self.space_lambda,
            V=self.V.conj(), K=self.K.conj(), W=self.W.conj(),
            mass_uu=self.mass_uu, mass_ll=self.mass_ll, mass_ul=self.mass_ul, mass_lu=self.mass_lu,
        )


class CalderonAssembler:
    """Reusable assembly schedules for the three operator blocks of one space pair."""

    def __init__(
        self,
        space_u: DofSpace,
        space_lambda: DofSpace,
        quad_config: Optional[QuadratureConfig] = None,
        threads: Optional[int] = None,
    ):
        check_same_mesh(space_u, space_lambda)
        if space_u.kind != SpaceKind.P1_CONTINUOUS:
            raise ContractViolationError(f"the Dirichlet trace space must be P1_continuous, got {space_u.kind.value}")
        self.space_u = space_u
        self.space_lambda = space_lambda
        if space_lambda.kind == space_u.kind:
            self._jobs = [(OperatorAssembler(space_u, space_u, quad_config, threads), [OperatorKind.V, OperatorKind.K, OperatorKind.W])]
        else:
            self._jobs = [
                (OperatorAssembler(space_u, space_u, quad_config, threads), [OperatorKind.W]),
                (OperatorAssembler(space_lambda, space_lambda, quad_config, threads), [OperatorKind.V]),
                (OperatorAssembler(space_u, space_lambda, quad_config, threads), [OperatorKind.K]),
            ]
        self.mass_uu = assemble_mass(space_u, space_u)
        self.mass_ll = assemble_mass(space_lambda, space_lambda)
        self.mass_ul = assemble_mass(trial=space_lambda, test=space_u)
        self.mass_lu = assemble_mass(trial=space_u, test=space_lambda)
        self._preconditioner: Optional[Preconditioner] = None

    @property
    def preconditioner(self) -> Preconditioner:
        if self._preconditioner is None:
            self._preconditioner = build_preconditioner(self.mass_uu, self.mass_ll)
        return self._preconditioner

    def assemble(self, k: float) -> CalderonOperators:
        blocks: Dict[OperatorKind, np.ndarray] = {}
        for assembler, kinds in self._jobs:
            for kind, matrix in assembler.assemble(kinds, k).items():
                blocks[kind] = matrix.entries
        return CalderonOperators(
            k=float(k),
            space_u=self.space_u,
            space_lambda=self.space_lambda,
            V=blocks[OperatorKind.V],
            K=blocks[OperatorKind.K],
            W=blocks[OperatorKind.W],
            mass_uu=self.mass_uu,
            mass_ll=self.mass_ll,
            mass_ul=self.mass_ul,
            mass_lu=self.mass_lu,
        )


@dataclass(frozen=True, eq=False)
class BlockedDirichletSystem:
    """(A + B_D) operator, the L_D load vector and their metadata."""
    operator: BlockOperator
    rhs: np.ndarray
    space_u: DofSpace
    space_lambda: DofSpace
    k: float
    penalty: PenaltyParameter
    beta: complex
    operators: CalderonOperators

    @property
    def mesh(self) -> Mesh:
        return self.space_u.mesh

    @property
    def n_dofs(self) -> int:
        return self.space_u.dof_count + self.space_lambda.dof_count


@dataclass(frozen=True, eq=False)
class TraceSolution:
    """Coefficients of the Dirichlet trace u and the Neumann trace lambda."""
    u_coeffs: np.ndarray
    lambda_coeffs: np.ndarray
    space_u: DofSpace
    space_lambda: DofSpace
    k: float
    beta: complex = 0j
    metadata: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.u_coeffs.shape != (self.space_u.dof_count,):
            raise ContractViolationError(f"u needs {self.space_u.dof_count} coefficients, got {self.u_coeffs.shape}")
        if self.lambda_coeffs.shape != (self.space_lambda.dof_count,):
            raise ContractViolationError(
                f"lambda needs {self.space_lambda.dof_count} coefficients, got {self.lambda_coeffs.shape}"
            )

    @property
    def mesh(self) -> Mesh:
        return self.space_u.mesh


def dirichlet_load_vector(
    space_u: DofSpace,
    space_lambda: DofSpace,
    beta: complex,
    g_D: Optional[BoundaryFunction],
    order: Optional[int] = None,
) -> np.ndarray:
    """L_D coefficients (beta <g, v_i>, -<g, mu_j>); zero when g_D is None."""
    if g_D is None:
        return np.zeros(space_u.dof_count + space_lambda.dof_count, dtype=np.complex128)
    load_u = integrate_against_basis(space_u, g_D, order)
    load_lambda = integrate_against_basis(space_lambda, g_D, order)
    return np.concatenate([beta * load_u, -load_lambda])


def build_dirichlet_system(
    mesh: Mesh,
    space_u: DofSpace,
    space_lambda: DofSpace,
    k: float,
    penalty: PenaltyParameter,
    g_D: Optional[BoundaryFunction],
    quad_config: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
    operators: Optional[CalderonOperators] = None,
    validate_penalty: bool = True,
    rhs_order: Optional[int] = None,
) -> BlockedDirichletSystem:
    """
    Assemble (A + B_D) and L_D.

    Args:
        mesh: Surface mesh shared by both spaces
        space_u: Dirichlet-trace space (P1_continuous)
        space_lambda: Neumann-trace space (P1_continuous or DP0)
        k: Wavenumber (> 0)
        penalty: Base penalty value and scaling
        g_D: Dirichlet data g(points, normals), or None for zero data
        quad_config: Quadrature orders for operator assembly
        threads: Assembly threads
        operators: Precomputed blocks at wavenumber k (skips operator assembly)
        validate_penalty: Enforce Re(beta_D) > 0; only validation code disables it
        rhs_order: Triangle rule order for the load vector

    Returns:
        BlockedDirichletSystem
    """
    if check_same_mesh(space_u, space_lambda) is not mesh:
        raise ContractViolationError("spaces do not live on the given mesh")
    beta = penalty.effective(mesh.h_max)
    if validate_penalty:
        check_penalty_hypothesis(beta)

    if operators is None:
        calderon = CalderonAssembler(space_u, space_lambda, quad_config, threads)
        operators = calderon.assemble(k)
    elif operators.space_u.mesh is not mesh or abs(operators.k - k) > 0.0:
        raise ContractViolationError("precomputed operators belong to a different mesh or wavenumber")

    n_u = space_u.dof_count
    n_l = space_lambda.dof_count
    half_ul = 0.5 * operators.mass_ul.entries
    half_lu = 0.5 * operators.mass_lu.entries
    blocks = [
        [
            OperatorBlock(shape=(n_u, n_u), dense=operators.W, sparse=beta * operators.mass_uu.entries),
            OperatorBlock(shape=(n_u, n_l), dense=operators.K, transpose=True, sparse=half_ul),
        ],
        [
            OperatorBlock(shape=(n_l, n_u), dense=operators.K, scale=-1.0, sparse=-half_lu),
            OperatorBlock(shape=(n_l, n_l), dense=operators.V),
        ],
    ]
    rhs = dirichlet_load_vector(space_u, space_lambda, beta, g_D, rhs_order)

    logger.info(
        "Dirichlet system built",
        k=k,
        beta=str(beta),
        n_u=n_u,
        n_lambda=n_l,
        h_max=mesh.h_max,
    )
    return BlockedDirichletSystem(
        operator=BlockOperator(blocks),
        rhs=rhs,
        space_u=space_u,
        space_lambda=space_lambda,
        k=float(k),
        penalty=penalty,
        beta=beta,
        operators=operators,
    )


def solve_dirichlet(
    system: BlockedDirichletSystem,
    tol: Optional[float] = None,
    maxiter: Optional[int] = None,
    preconditioner: Optional[Preconditioner] = None,
) -> Tuple[TraceSolution, SolveReport]:
    """
    Solve the blocked system with mass-preconditioned GMRES.

    Args:
        system: Assembled system
        tol: Relative preconditioned residual tolerance (defaults from settings)
        maxiter: Iteration cap (defaults from settings)
        preconditioner: Reuse an existing preconditioner for the same spaces

    Returns:
        (TraceSolution, SolveReport)
    """
    settings = get_settings()
    tol = settings.gmres_tol if tol is None else tol
    maxiter = settings.maxiter if maxiter is None else maxiter
    preconditioner = preconditioner or build_preconditioner(
        system.operators.mass_uu, system.operators.mass_ll
    )

    started = time.perf_counter()
    x, report = gmres_solve(system.operator, system.rhs, preconditioner, tol=tol, maxiter=maxiter)
    u, lam = system.operator.split(x)
    solution = TraceSolution(
        u_coeffs=u.copy(),
        lambda_coeffs=lam.copy(),
        space_u=system.space_u,
        space_lambda=system.space_lambda,
        k=system.k,
        beta=system.beta,
        metadata={"h_max": system.mesh.h_max},
    )
    log = logger.info if report.converged else logger.warning
    log(
        "Dirichlet solve finished",
        k=system.k,
        beta=str(system.beta),
        iterations=report.iterations,
        converged=report.converged,
        final_residual=report.final_residual,
        wall_time=round(time.perf_counter() - started, 3),
    )
    return solution, report


def dirichlet_residual(system: BlockedDirichletSystem, u: np.ndarray, lam: np.ndarray) -> float:
    """||(A + B_D)(u, lambda) - L_D|| / ||L_D||, absolute when L_D = 0."""
    x = np.concatenate([np.asarray(u, dtype=np.complex128), np.asarray(lam, dtype=np.complex128)])
    residual = np.linalg.norm(system.operator.apply(x) - system.rhs)
    norm = np.linalg.norm(system.rhs)
    return float(residual / norm) if norm > 0.0 else float(residual)


def calderon_residual(operators: CalderonOperators, u: np.ndarray, lam: np.ndarray) -> float:
    """
    Residual of the exterior Calderon identity A[(u, lambda), (v, mu)] + 1/2 <u, mu> + 1/2 <lambda, v> = 0
    over all basis test pairs, normalized by the size of the mass terms.

    Rows: W u + K' lambda + 1/2 M_ul lambda (tested with v) and -K u + V lambda + 1/2 M_lu u (tested with mu).
    """
    u = np.asarray(u, dtype=np.complex128)
    lam = np.asarray(lam, dtype=np.complex128)
    half_v = 0.5 * (operators.mass_ul.entries @ lam)
    half_mu = 0.5 * (operators.mass_lu.entries @ u)
    row_v = operators.W @ u + operators.Kadj @ lam + half_v
    row_mu = -(operators.K @ u) + operators.V @ lam + half_mu
    scale = np.sqrt(np.linalg.norm(half_v) ** 2 + np.linalg.norm(half_mu) ** 2)
    residual = np.sqrt(np.linalg.norm(row_v) ** 2 + np.linalg.norm(row_mu) ** 2)
    if scale == 0.0:
        return float(residual)
    return float(residual / scale)
