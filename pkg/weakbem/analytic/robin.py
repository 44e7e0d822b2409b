"""Robin eigenvalues of the unit ball: real roots of k j_l'(k) + beta j_l(k) = 0."""
from typing import Optional

import numpy as np
from scipy.optimize import bisect
from scipy.special import spherical_jn

from weakbem.config.logging_config import get_logger

logger = get_logger(__name__)

SEARCH_MIN = 0.1
SEARCH_MAX = 20.0
SEARCH_STEP = 0.01
ROOT_TOLERANCE = 1e-12


def robin_function(l: int, beta: float, k):
    """k j_l'(k) + beta j_l(k)."""
    return k * spherical_jn(l, k, derivative=True) + beta * spherical_jn(l, k)


def robin_wavenumber_oracle(l: int, beta: complex) -> Optional[float]:
    """
    Smallest positive Robin wavenumber for degree l, searched on [0.1, 20].

    Args:
        l: Spherical harmonic degree (>= 0)
        beta: Robin parameter; a nonzero imaginary part admits no real eigenvalue

    Returns:
        The root, or None when beta is not real or no sign change is found
    """
    beta = complex(beta)
    if beta.imag != 0.0:
        return None
    grid = np.arange(SEARCH_MIN, SEARCH_MAX + 0.5 * SEARCH_STEP, SEARCH_STEP)
    values = robin_function(l, beta.real, grid)
    for i in range(grid.size - 1):
        if values[i] == 0.0:
            return float(grid[i])
        if values[i] * values[i + 1] < 0.0:
            root = bisect(lambda k: robin_function(l, beta.real, k), grid[i], grid[i + 1], xtol=ROOT_TOLERANCE)
            logger.debug("Robin root found", l=l, beta=beta.real, k=root)
            return float(root)
    return None
