"""Left-preconditioned full GMRES on top of scipy.sparse.linalg.gmres.

Convergence is measured in the preconditioned residual norm; the
unpreconditioned residual is available through true_relative_residual.
"""
import time
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import ContractViolationError
from weakbem.models.reports import SolveReport

logger = get_logger(__name__)


def _as_callable(operator) -> Callable[[np.ndarray], np.ndarray]:
    if operator is None:
        return lambda v: v
    if hasattr(operator, "apply"):
        return operator.apply
    if callable(operator):
        return operator
    return lambda v: operator @ v


def _linear_operator(apply: Callable[[np.ndarray], np.ndarray], n: int) -> LinearOperator:
    return LinearOperator((n, n), matvec=lambda v: apply(np.asarray(v, dtype=np.complex128).ravel()),
                          dtype=np.complex128)


class _ResidualRecorder:
    """Collects the relative preconditioned residual after every inner step."""

    def __init__(self, scale: float):
        # scipy reports ||P r_j|| / ||b||; rescale to ||P r_j|| / ||P r_0||
        self.scale = scale
        self.history: List[float] = [1.0]

    def __call__(self, pr_norm: float) -> None:
        self.history.append(float(pr_norm) * self.scale)

    @property
    def iterations(self) -> int:
        return len(self.history) - 1


def gmres_solve(
    A,
    b: np.ndarray,
    P=None,
    tol: float = 1e-5,
    maxiter: int = 1000,
    x0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, SolveReport]:
    """
    Solve A x = b with left preconditioner P and no restart.

    Args:
        A: Operator with an apply method, a callable or a matrix
        b: Right-hand side
        P: Left preconditioner (same conventions), None for identity
        tol: Relative tolerance on ||P(b - A x)|| / ||P(b - A x0)||
        maxiter: Maximum Arnoldi steps
        x0: Initial guess (zero by default)

    Returns:
        (x, SolveReport); non-convergence is reported, never raised
    """
    if not tol > 0.0:
        raise ContractViolationError(f"GMRES tolerance must be positive, got {tol}")
    if maxiter < 1:
        raise ContractViolationError(f"maxiter must be at least 1, got {maxiter}")

    apply_a = _as_callable(A)
    apply_p = _as_callable(P)
    b = np.asarray(b, dtype=np.complex128)
    n = b.size
    x = np.zeros(n, dtype=np.complex128) if x0 is None else np.array(x0, dtype=np.complex128)

    started = time.perf_counter()
    initial = apply_p(b - apply_a(x)) if x0 is not None else apply_p(b)
    initial_norm = np.linalg.norm(initial)
    if initial_norm == 0.0:
        report = SolveReport(iterations=0, residual_history=[1.0], converged=True, tolerance=tol,
                             wall_time=time.perf_counter() - started)
        return x, report

    recorder = _ResidualRecorder(np.linalg.norm(b) / initial_norm)
    rtol = tol
    if x0 is not None:
        rhs_norm = np.linalg.norm(apply_p(b))
        if rhs_norm > 0.0:
            rtol = tol * initial_norm / rhs_norm
    # One outer cycle whose length covers every allowed step: unrestarted GMRES.
    # The inner stopping test is ||P r|| <= rtol ||P b||, i.e. the preconditioned criterion.
    x, info = gmres(
        _linear_operator(apply_a, n),
        b,
        x0=x,
        rtol=rtol,
        atol=0.0,
        restart=min(maxiter, n),
        maxiter=1,
        M=None if P is None else _linear_operator(apply_p, n),
        callback=recorder,
        callback_type="pr_norm",
    )
    history = recorder.history
    converged = history[-1] <= tol

    report = SolveReport(
        iterations=recorder.iterations,
        residual_history=history,
        converged=converged,
        tolerance=tol,
        wall_time=time.perf_counter() - started,
    )
    logger.debug(
        "GMRES finished",
        n=n,
        iterations=report.iterations,
        converged=converged,
        final_residual=history[-1],
        scipy_info=info,
        wall_time=round(report.wall_time, 3),
    )
    return np.asarray(x, dtype=np.complex128), report


def true_relative_residual(A, x: np.ndarray, b: np.ndarray) -> float:
    """||b - A x|| / ||b|| without preconditioning (absolute norm when b = 0)."""
    apply_a = _as_callable(A)
    b = np.asarray(b, dtype=np.complex128)
    residual = np.linalg.norm(b - apply_a(np.asarray(x, dtype=np.complex128)))
    norm_b = np.linalg.norm(b)
    return float(residual / norm_b) if norm_b > 0.0 else float(residual)
