"""Spherical Bessel functions and operator symbols on the unit sphere."""
import numpy as np
from scipy.special import spherical_jn, spherical_yn

from weakbem.exceptions import ContractViolationError
from weakbem.models.enums import OperatorKind

MAX_DEGREE = 10
MIN_WAVENUMBER = 0.5


def spherical_hn1(l: int, x, derivative: bool = False):
    """Spherical Hankel function of the first kind h_l = j_l + i y_l (or its derivative)."""
    return spherical_jn(l, x, derivative=derivative) + 1j * spherical_yn(l, x, derivative=derivative)


def sphere_symbol_oracle(kind, l: int, k: float) -> complex:
    """
    Eigenvalue of V or W on degree-l spherical harmonics of the unit sphere.

    V: ik j_l(k) h_l(k); W: -ik^3 j_l'(k) h_l'(k).

    Args:
        kind: V or W
        l: Harmonic degree, 0..10
        k: Wavenumber, at least 0.5

    Returns:
        Complex symbol value
    """
    kind = OperatorKind(kind)
    if not 0 <= l <= MAX_DEGREE:
        raise ContractViolationError(f"harmonic degree must be in 0..{MAX_DEGREE}, got {l}")
    if k < MIN_WAVENUMBER:
        raise ContractViolationError(f"symbol oracle is restricted to k >= {MIN_WAVENUMBER}, got {k}")
    if kind == OperatorKind.V:
        return complex(1j * k * spherical_jn(l, k) * spherical_hn1(l, k))
    if kind == OperatorKind.W:
        return complex(-1j * k ** 3 * spherical_jn(l, k, derivative=True) * spherical_hn1(l, k, derivative=True))
    raise ContractViolationError(f"no symbol oracle for operator {kind.value}")


def real_spherical_harmonic_l1(points: np.ndarray) -> np.ndarray:
    """The degree-1 harmonic z/|x| evaluated at points."""
    points = np.asarray(points, dtype=np.float64)
    return points[..., 2] / np.linalg.norm(points, axis=-1)
