"""Complex penalty parameter of the weak Dirichlet form."""
from pydantic import BaseModel, ConfigDict, Field

from weakbem.exceptions import ContractViolationError, HypothesisViolationError
from weakbem.models.enums import PenaltyScaling


class PenaltyParameter(BaseModel):
    """Base value beta_D = beta_re + i beta_im and its mesh scaling."""
    beta_re: float = Field(default=1.0, description="Real part of the base penalty value")
    beta_im: float = Field(default=-1.0, description="Imaginary part of the base penalty value")
    scaling: PenaltyScaling = Field(default=PenaltyScaling.CONSTANT, description="constant or inverse_h")

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_complex(cls, beta: complex, scaling: PenaltyScaling = PenaltyScaling.CONSTANT) -> "PenaltyParameter":
        beta = complex(beta)
        return cls(beta_re=beta.real, beta_im=beta.imag, scaling=scaling)

    @property
    def base(self) -> complex:
        return complex(self.beta_re, self.beta_im)

    def effective(self, h_max: float) -> complex:
        """beta_D after scaling: the base value, or base / h_max for inverse_h."""
        if self.scaling == PenaltyScaling.INVERSE_H:
            if not h_max > 0.0:
                raise ContractViolationError(f"h_max must be positive, got {h_max}")
            return self.base / h_max
        return self.base

    def conjugate(self) -> "PenaltyParameter":
        return PenaltyParameter(beta_re=self.beta_re, beta_im=-self.beta_im, scaling=self.scaling)


def check_penalty_hypothesis(beta: complex) -> None:
    """Well-posedness needs Re(beta_D) > 0."""
    if not complex(beta).real > 0.0:
        raise HypothesisViolationError(f"penalty parameter needs Re(beta_D) > 0, got {complex(beta)}")
