"""Exceptions raised across the weakbem package."""


class WeakBemError(Exception):
    """Base class for all library errors."""
    pass


class MeshError(WeakBemError):
    """Mesh violates a structural invariant or a mesh file is malformed."""
    pass


class CapacityError(WeakBemError):
    """Requested problem size exceeds a memory guard."""
    pass


class QuadratureConfigError(WeakBemError):
    """Unsupported quadrature order."""
    pass


class ContractViolationError(WeakBemError):
    """Caller broke a documented precondition."""
    pass


class SingularityError(WeakBemError):
    """Kernel or field evaluated exactly at a singular point."""
    pass


class AssemblyError(WeakBemError):
    """Galerkin assembly produced a non-finite entry."""

    def __init__(self, message: str, test_triangle: int = -1, trial_triangle: int = -1):
        super().__init__(message)
        self.test_triangle = test_triangle
        self.trial_triangle = trial_triangle


class FactorizationError(WeakBemError):
    """Mass matrix could not be factorized as symmetric positive definite."""
    pass


class HypothesisViolationError(WeakBemError):
    """Penalty parameter outside the well-posedness hypothesis (Re beta_D > 0)."""
    pass


class ConfigurationError(WeakBemError):
    """Experiment configuration is invalid."""
    pass


class MatrixDumpError(WeakBemError):
    """Matrix dump could not be written or parsed."""
    pass
