"""Shared fixtures: small icospheres, trace spaces and assembled operators."""
import pytest

from weakbem.geometry.icosphere import build_icosphere
from weakbem.models.enums import SpaceKind
from weakbem.operators.spaces import build_space
from weakbem.formulation.dirichlet import CalderonAssembler
from weakbem.quadrature.config import QuadratureConfig


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run level 3/4 meshes and sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def quad_config():
    return QuadratureConfig(regular_order=4, singular_order=4, near_field_factor=2.0)


@pytest.fixture(scope="session")
def level1_mesh():
    return build_icosphere(1)


@pytest.fixture(scope="session")
def level2_mesh():
    return build_icosphere(2)


@pytest.fixture(scope="session")
def p1_level2(level2_mesh):
    return build_space(level2_mesh, SpaceKind.P1_CONTINUOUS)


@pytest.fixture(scope="session")
def dp0_level2(level2_mesh):
    return build_space(level2_mesh, SpaceKind.DP0)


@pytest.fixture(scope="session")
def calderon_level2(p1_level2, quad_config):
    """P1 x P1 Calderon blocks at k = 3 on the level-2 icosphere."""
    assembler = CalderonAssembler(p1_level2, p1_level2, quad_config)
    return assembler, assembler.assemble(3.0)
