"""L2(surface) error metrics against exact traces, and rate fitting."""
from typing import Optional, Sequence

import numpy as np

from weakbem.config.settings import get_settings
from weakbem.exceptions import ContractViolationError
from weakbem.models.reports import ErrorMetric
from weakbem.operators.projection import BoundaryFunction, evaluate_on_surface, l2_norm, surface_quadrature
from weakbem.operators.spaces import DofSpace
from weakbem.formulation.dirichlet import TraceSolution


def _discrete_values(space: DofSpace, coeffs: np.ndarray, bary: np.ndarray) -> np.ndarray:
    basis = space.basis_values(bary)
    return np.einsum("ta,qa->tq", np.asarray(coeffs, dtype=np.complex128)[space.local2global], basis)


def _ratio(error: float, norm: float):
    if norm == 0.0:
        return error, True
    return error / norm, False


def relative_error(
    solution: TraceSolution,
    exact_u: BoundaryFunction,
    exact_lambda: BoundaryFunction,
    beta: Optional[complex] = None,
    order: Optional[int] = None,
) -> ErrorMetric:
    """
    L2(surface) errors of both traces.

    Args:
        solution: Discrete traces
        exact_u: Exact Dirichlet trace g(points, normals)
        exact_lambda: Exact Neumann trace
        beta: Penalty weight for the penalty and B_D-norm terms (defaults to solution.beta)
        order: Triangle rule order (defaults to rhs_quad_order)

    Returns:
        ErrorMetric with relative errors, or absolute ones flagged when an exact norm vanishes
    """
    order = get_settings().rhs_quad_order if order is None else order
    beta = solution.beta if beta is None else complex(beta)
    weight = np.sqrt(abs(beta))

    points, weights, normals, bary = surface_quadrature(solution.mesh, order)
    exact_u_values = evaluate_on_surface(exact_u, points, normals)
    exact_l_values = evaluate_on_surface(exact_lambda, points, normals)
    u_values = _discrete_values(solution.space_u, solution.u_coeffs, bary)
    l_values = _discrete_values(solution.space_lambda, solution.lambda_coeffs, bary)

    err_u = l2_norm(u_values - exact_u_values, weights)
    err_l = l2_norm(l_values - exact_l_values, weights)
    norm_u = l2_norm(exact_u_values, weights)
    norm_l = l2_norm(exact_l_values, weights)

    rel_u, abs_u = _ratio(err_u, norm_u)
    rel_l, abs_l = _ratio(err_l, norm_l)
    penalty, abs_p = _ratio(weight * err_u, norm_u)
    b_norm, abs_b = _ratio(err_u + err_l + weight * err_u, norm_u + norm_l + weight * norm_u)
    return ErrorMetric(
        rel_l2_u=rel_u,
        rel_l2_lambda=rel_l,
        penalty_l2_u=penalty,
        b_norm=b_norm,
        absolute=abs_u or abs_l or abs_p or abs_b,
    )


def fit_loglog_slope(h: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    h = np.asarray(h, dtype=np.float64)
    errors = np.asarray(errors, dtype=np.float64)
    keep = (h > 0.0) & (errors > 0.0) & np.isfinite(errors)
    if keep.sum() < 2:
        raise ContractViolationError("slope fit needs at least two positive (h, error) pairs")
    slope, _ = np.polyfit(np.log(h[keep]), np.log(errors[keep]), 1)
    return float(slope)
