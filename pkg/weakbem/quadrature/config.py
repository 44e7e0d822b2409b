"""Quadrature settings passed to operator assembly."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from weakbem.config.settings import Settings, get_settings
from weakbem.quadrature.singular import MAX_SINGULAR_ORDER
from weakbem.quadrature.triangle import MAX_TRIANGLE_ORDER


class QuadratureConfig(BaseModel):
    """Orders used for regular, near-field and singular triangle pairs."""
    regular_order: int = Field(default=4, ge=1, le=MAX_TRIANGLE_ORDER, description="Triangle rule order for disjoint pairs")
    singular_order: int = Field(default=4, ge=2, le=MAX_SINGULAR_ORDER, description="Gauss points per axis for touching pairs")
    near_field_factor: float = Field(
        default=2.0, ge=0.0,
        description="Disjoint pairs with centroid distance below factor x larger diameter are near-field"
    )

    model_config = ConfigDict(frozen=True)

    @property
    def near_order(self) -> int:
        """Doubled regular order for near-field pairs, capped at the largest tabulated rule."""
        return min(2 * self.regular_order, MAX_TRIANGLE_ORDER)

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None) -> "QuadratureConfig":
        settings = settings or get_settings()
        return cls(
            regular_order=settings.quad_order,
            singular_order=settings.singular_order,
            near_field_factor=settings.near_field_factor,
        )
