"""Galerkin boundary elements for the exterior Helmholtz Dirichlet problem with weakly imposed boundary conditions."""
__version__ = "0.1.0"
