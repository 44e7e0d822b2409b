"""Reference solutions, sphere oracles and error metrics."""

from weakbem.analytic.point_source import (
    DEFAULT_SOURCES,
    PointSourceData,
    point_source_field,
    point_source_neumann_trace,
)
from weakbem.analytic.bessel import real_spherical_harmonic_l1, sphere_symbol_oracle, spherical_hn1
from weakbem.analytic.robin import robin_function, robin_wavenumber_oracle
from weakbem.analytic.errors import fit_loglog_slope, relative_error

__all__ = [
    # Point sources
    "DEFAULT_SOURCES",
    "PointSourceData",
    "point_source_field",
    "point_source_neumann_trace",
    # Sphere oracles
    "sphere_symbol_oracle",
    "spherical_hn1",
    "real_spherical_harmonic_l1",
    "robin_function",
    "robin_wavenumber_oracle",
    # Errors
    "relative_error",
    "fit_loglog_slope",
]
