"""Helmholtz Green's function G(x, y) = exp(ik|x-y|) / (4 pi |x-y|) and its normal derivatives."""
import numpy as np

from weakbem.exceptions import ContractViolationError, SingularityError

FOUR_PI = 4.0 * np.pi


def _distance(x: np.ndarray, y: np.ndarray):
    diff = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    r = np.linalg.norm(diff, axis=-1)
    if np.any(r == 0.0):
        raise SingularityError("kernel evaluated at coincident points x = y")
    return diff, r


def _check_wavenumber(k: float) -> None:
    if not k > 0.0:
        raise ContractViolationError(f"wavenumber must be positive, got {k}")


def _scalar(value):
    return complex(value) if np.ndim(value) == 0 else value


def green_kernel(k: float, x: np.ndarray, y: np.ndarray):
    """
    Evaluate G(x, y). Broadcasts over leading point dimensions.

    Args:
        k: Wavenumber (> 0)
        x: Point(s), shape (..., 3)
        y: Point(s), shape (..., 3)

    Returns:
        Complex value(s); a Python complex for single points
    """
    _check_wavenumber(k)
    _, r = _distance(x, y)
    return _scalar(np.exp(1j * k * r) / (FOUR_PI * r))


def green_normal_derivative(k: float, x: np.ndarray, y: np.ndarray, n: np.ndarray):
    """
    Evaluate dG/dn_y(x, y) = (ik r - 1) exp(ik r) / (4 pi r^3) * (y - x).n with r = |x - y|.

    Args:
        k: Wavenumber (> 0)
        x: Target point(s), shape (..., 3)
        y: Source point(s), shape (..., 3)
        n: Unit normal(s) at y, shape (..., 3)

    Returns:
        Complex value(s); a Python complex for single points
    """
    _check_wavenumber(k)
    diff, r = _distance(x, y)
    projection = -np.sum(diff * np.asarray(n, dtype=np.float64), axis=-1)
    radial = (1j * k * r - 1.0) * np.exp(1j * k * r) / (FOUR_PI * r ** 3)
    return _scalar(radial * projection)


def green_normal_derivative_target(k: float, x: np.ndarray, y: np.ndarray, n: np.ndarray):
    """dG/dn_x(x, y), the adjoint double-layer kernel, with n the unit normal at x."""
    return green_normal_derivative(k, y, x, n)
