import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from weakbem.analytic.bessel import real_spherical_harmonic_l1, sphere_symbol_oracle, spherical_hn1
from weakbem.analytic.errors import fit_loglog_slope, relative_error
from weakbem.analytic.point_source import PointSourceData, point_source_field, point_source_neumann_trace
from weakbem.analytic.robin import robin_function, robin_wavenumber_oracle
from weakbem.exceptions import ContractViolationError, SingularityError
from weakbem.formulation.dirichlet import TraceSolution
from weakbem.formulation.interpolation import interpolate_traces
from weakbem.geometry.icosphere import build_icosphere
from weakbem.models.enums import OperatorKind, SpaceKind
from weakbem.operators.spaces import build_space


def _laplacian(func, x, step=1e-3):
    total = -6.0 * func(x)
    for axis in range(3):
        offset = np.zeros(3)
        offset[axis] = step
        total += func(x + offset) + func(x - offset)
    return total / step ** 2


class TestPointSource:
    def test_value_on_sphere(self):
        value = point_source_field(2.0, np.array([1.0, 0.0, 0.0]))
        r1 = math.sqrt(0.81 + 0.25 + 0.25)
        r2 = math.sqrt(0.81 + 0.0625 + 0.0625)
        expected = np.exp(2j * r1) / r1 + np.exp(2j * r2) / r2
        assert isinstance(value, complex)
        assert_allclose(value, expected, rtol=1e-14)
        assert_allclose(value, -0.9422 + 1.6247j, atol=2e-3)

    def test_vectorized(self):
        points = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 2.0], [0.0, -3.0, 0.0]])
        values = point_source_field(3.0, points)
        assert values.shape == (3,)
        assert_allclose(values[1], point_source_field(3.0, points[1]))

    @pytest.mark.parametrize("x", [[1.5, 0.2, -0.3], [0.0, 0.0, 2.0]])
    def test_helmholtz_equation(self, x):
        k = 3.0
        x = np.array(x)
        residual = _laplacian(lambda p: point_source_field(k, p), x) + k ** 2 * point_source_field(k, x)
        assert abs(residual) < 1e-3

    def test_neumann_trace_is_normal_derivative(self):
        k, step = 2.0, 1e-6
        x = np.array([0.6, -0.64, 0.48])
        n = x / np.linalg.norm(x)
        difference = (point_source_field(k, x + step * n) - point_source_field(k, x - step * n)) / (2.0 * step)
        assert_allclose(point_source_neumann_trace(k, x, n), difference, rtol=1e-6)

    def test_guards(self):
        with pytest.raises(SingularityError):
            point_source_field(1.0, np.array([0.1, 0.5, 0.5]))
        with pytest.raises(ContractViolationError):
            point_source_field(0.0, np.array([1.0, 0.0, 0.0]))
        with pytest.raises(ContractViolationError):
            PointSourceData(k=1.0, sources=((0.0, 0.0, 1.5),))

    def test_boundary_functions(self):
        data = PointSourceData(k=2.0)
        points = build_icosphere(0).vertices
        normals = points.copy()
        assert_allclose(data.dirichlet_trace(points, normals), data.field(points))
        assert data.neumann_trace(points, normals).shape == (12,)


class TestRobinOracle:
    def test_degree0_unit_beta(self):
        assert_allclose(robin_wavenumber_oracle(0, 1.0), math.pi / 2.0, rtol=1e-10)

    def test_degree1_unit_beta(self):
        root = robin_wavenumber_oracle(1, 1.0)
        assert 2.70 <= root <= 2.80
        assert abs(robin_function(1, 1.0, root)) < 1e-9

    @pytest.mark.parametrize("beta", [1.0 - 1.0j, 2.0j])
    def test_complex_beta_has_no_real_root(self, beta):
        assert robin_wavenumber_oracle(0, beta) is None

    def test_neumann_limit(self):
        # beta = 0 gives the first zero of j_0', the root of tan k = k
        root = robin_wavenumber_oracle(0, 0.0)
        assert_allclose(math.tan(root), root, rtol=1e-8)


class TestSymbols:
    def test_hankel(self):
        x = 1.7
        assert_allclose(spherical_hn1(0, x), -1j * np.exp(1j * x) / x, rtol=1e-14)

    @pytest.mark.parametrize("x", [0.5, 2.0, 5.0, 10.0])
    def test_degree10_against_recurrences(self, x):
        # y_l upward from the closed forms; j_l downward (Miller) normalized by j_0
        y = [-math.cos(x) / x, -math.cos(x) / x ** 2 - math.sin(x) / x]
        for l in range(1, 10):
            y.append((2 * l + 1) / x * y[l] - y[l - 1])
        j = [0.0, 1.0]
        for l in range(50, 0, -1):
            j.append((2 * l + 1) / x * j[-1] - j[-2])
        j10 = j[-11] * (math.sin(x) / x) / j[-1]
        assert_allclose(spherical_hn1(10, x), j10 + 1j * y[10], rtol=1e-10)
        assert_allclose(spherical_hn1(10, x).real, j10, rtol=1e-10)

    @pytest.mark.parametrize("k", [0.5, 2.0, 4.5])
    def test_single_layer_degree0(self, k):
        assert_allclose(sphere_symbol_oracle(OperatorKind.V, 0, k), math.sin(k) * np.exp(1j * k) / k, rtol=1e-12)

    def test_single_layer_value(self):
        assert_allclose(sphere_symbol_oracle("V", 0, 2.0), -0.18920 + 0.41341j, atol=1e-4)

    def test_hypersingular_degree0_vanishes_with_k(self):
        small = abs(sphere_symbol_oracle(OperatorKind.W, 0, 0.5))
        larger = abs(sphere_symbol_oracle(OperatorKind.W, 0, 1.0))
        assert small < larger

    def test_guards(self):
        with pytest.raises(ContractViolationError):
            sphere_symbol_oracle(OperatorKind.V, 0, 0.4)
        with pytest.raises(ContractViolationError):
            sphere_symbol_oracle(OperatorKind.V, 11, 2.0)
        with pytest.raises(ContractViolationError):
            sphere_symbol_oracle(OperatorKind.K, 1, 2.0)

    def test_degree1_harmonic(self):
        points = np.array([[0.0, 0.0, 2.0], [3.0, 0.0, 4.0]])
        assert_allclose(real_spherical_harmonic_l1(points), [1.0, 0.8])


class TestErrorMetrics:
    @pytest.fixture(scope="class")
    def exact(self):
        mesh = build_icosphere(1)
        space = build_space(mesh, SpaceKind.P1_CONTINUOUS)
        data = PointSourceData(k=2.0)
        traces = interpolate_traces(mesh, space, space, data.dirichlet_trace, data.neumann_trace, 2.0, beta=4.0)
        return traces, data

    def test_scale_invariant(self, exact):
        traces, data = exact
        scaled = TraceSolution(
            2.0 * traces.u_coeffs, 2.0 * traces.lambda_coeffs, traces.space_u, traces.space_lambda, traces.k, traces.beta,
        )
        errors = relative_error(traces, data.dirichlet_trace, data.neumann_trace)
        scaled_errors = relative_error(
            scaled, lambda p, n: 2.0 * data.dirichlet_trace(p, n), lambda p, n: 2.0 * data.neumann_trace(p, n),
        )
        assert_allclose(scaled_errors.rel_l2_u, errors.rel_l2_u, rtol=1e-10)
        assert_allclose(scaled_errors.rel_l2_lambda, errors.rel_l2_lambda, rtol=1e-10)

    def test_penalty_weight(self, exact):
        traces, data = exact
        errors = relative_error(traces, data.dirichlet_trace, data.neumann_trace)
        assert_allclose(errors.penalty_l2_u, 2.0 * errors.rel_l2_u)
        assert 0.0 < errors.b_norm
        assert not errors.absolute

    def test_zero_exact_trace_is_absolute(self, exact):
        traces, data = exact
        zero = lambda points, normals: np.zeros(len(points))
        errors = relative_error(traces, zero, data.neumann_trace)
        assert errors.absolute
        assert errors.rel_l2_u > 0.0

    def test_slope(self):
        h = np.array([0.4, 0.2, 0.1, 0.05])
        assert_allclose(fit_loglog_slope(h, 3.0 * h ** 2), 2.0)
        assert_allclose(fit_loglog_slope(h, [0.16, np.nan, 0.01, 0.0]), 2.0)

    def test_slope_needs_two_points(self):
        with pytest.raises(ContractViolationError):
            fit_loglog_slope([0.1, 0.2], [0.0, 1.0])
