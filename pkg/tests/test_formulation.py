import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from weakbem.analytic.errors import relative_error
from weakbem.analytic.point_source import PointSourceData
from weakbem.exceptions import ContractViolationError, HypothesisViolationError
from weakbem.geometry.icosphere import build_icosphere
from weakbem.models.enums import PenaltyScaling, SpaceKind
from weakbem.operators.projection import integrate_against_basis
from weakbem.operators.spaces import build_space
from weakbem.formulation.dirichlet import (
    CalderonAssembler,
    TraceSolution,
    build_dirichlet_system,
    calderon_residual,
    dirichlet_residual,
    solve_dirichlet,
)
from weakbem.formulation.interpolation import interpolate, interpolate_traces
from weakbem.formulation.penalty import PenaltyParameter, check_penalty_hypothesis
from weakbem.formulation.representation import evaluate_representation

K = 3.0
PENALTY = PenaltyParameter(beta_re=1.0, beta_im=-1.0)


def _solve(level, space_lambda_kind, quad_config, penalty=PENALTY):
    mesh = build_icosphere(level)
    space_u = build_space(mesh, SpaceKind.P1_CONTINUOUS)
    space_lambda = space_u if space_lambda_kind == SpaceKind.P1_CONTINUOUS else build_space(mesh, space_lambda_kind)
    data = PointSourceData(k=K)
    assembler = CalderonAssembler(space_u, space_lambda, quad_config)
    system = build_dirichlet_system(
        mesh, space_u, space_lambda, K, penalty, data.dirichlet_trace, operators=assembler.assemble(K),
    )
    solution, report = solve_dirichlet(system, tol=1e-5, maxiter=500, preconditioner=assembler.preconditioner)
    return system, solution, report, relative_error(solution, data.dirichlet_trace, data.neumann_trace)


def _exact_traces(level):
    mesh = build_icosphere(level)
    space = build_space(mesh, SpaceKind.P1_CONTINUOUS)
    data = PointSourceData(k=K)
    return interpolate_traces(mesh, space, space, data.dirichlet_trace, data.neumann_trace, K), data


class TestPenalty:
    def test_defaults(self):
        assert PenaltyParameter().base == 1.0 - 1.0j

    def test_scaling(self):
        constant = PenaltyParameter.from_complex(2.0 - 1.0j)
        inverse = PenaltyParameter.from_complex(2.0 - 1.0j, PenaltyScaling.INVERSE_H)
        assert constant.effective(0.25) == 2.0 - 1.0j
        assert inverse.effective(0.25) == 8.0 - 4.0j
        with pytest.raises(ContractViolationError):
            inverse.effective(0.0)

    def test_conjugate(self):
        assert PenaltyParameter(beta_re=1.0, beta_im=-3.0).conjugate().base == 1.0 + 3.0j

    @pytest.mark.parametrize("beta", [0.0, -1.0 + 1.0j, 0.0 - 2.0j])
    def test_hypothesis(self, beta):
        with pytest.raises(HypothesisViolationError):
            check_penalty_hypothesis(beta)

    def test_frozen(self):
        with pytest.raises(ValueError):
            PENALTY.beta_re = 2.0


class TestBlockedSystem:
    def test_blocks(self, p1_level2, calderon_level2):
        _, operators = calderon_level2
        mesh = p1_level2.mesh
        data = PointSourceData(k=K)
        system = build_dirichlet_system(mesh, p1_level2, p1_level2, K, PENALTY, data.dirichlet_trace, operators=operators)
        beta = 1.0 - 1.0j
        n = p1_level2.dof_count
        dense = system.operator.to_dense()
        mass = operators.mass_uu.entries.toarray()
        assert_allclose(dense[:n, :n], operators.W + beta * mass)
        assert_allclose(dense[:n, n:], operators.K.T + 0.5 * operators.mass_ul.entries.toarray())
        assert_allclose(dense[n:, :n], -operators.K - 0.5 * operators.mass_lu.entries.toarray())
        assert_allclose(dense[n:, n:], operators.V)

        load = integrate_against_basis(p1_level2, data.dirichlet_trace)
        assert_allclose(system.rhs[:n], beta * load)
        assert_allclose(system.rhs[n:], -load)
        assert system.n_dofs == 2 * n
        assert system.beta == beta

    def test_zero_data_gives_zero_solution(self, p1_level2, calderon_level2):
        assembler, operators = calderon_level2
        system = build_dirichlet_system(p1_level2.mesh, p1_level2, p1_level2, K, PENALTY, None, operators=operators)
        solution, report = solve_dirichlet(system, preconditioner=assembler.preconditioner)
        assert report.converged
        assert_array_equal(solution.u_coeffs, 0.0)
        assert_array_equal(solution.lambda_coeffs, 0.0)

    def test_penalty_hypothesis_enforced(self, p1_level2, calderon_level2):
        _, operators = calderon_level2
        zero_real = PenaltyParameter(beta_re=0.0, beta_im=-1.0)
        with pytest.raises(HypothesisViolationError):
            build_dirichlet_system(p1_level2.mesh, p1_level2, p1_level2, K, zero_real, None, operators=operators)
        system = build_dirichlet_system(
            p1_level2.mesh, p1_level2, p1_level2, K, zero_real, None, operators=operators, validate_penalty=False,
        )
        assert system.beta == -1.0j

    def test_operators_checked(self, p1_level2, calderon_level2):
        _, operators = calderon_level2
        with pytest.raises(ContractViolationError):
            build_dirichlet_system(p1_level2.mesh, p1_level2, p1_level2, 2.0, PENALTY, None, operators=operators)

    def test_dirichlet_space_must_be_p1(self, dp0_level2, quad_config):
        with pytest.raises(ContractViolationError):
            CalderonAssembler(dp0_level2, dp0_level2, quad_config)

    def test_mixed_space_shapes(self, p1_level2, dp0_level2, quad_config):
        operators = CalderonAssembler(p1_level2, dp0_level2, quad_config).assemble(1.0)
        n_u, n_l = p1_level2.dof_count, dp0_level2.dof_count
        assert operators.W.shape == (n_u, n_u)
        assert operators.V.shape == (n_l, n_l)
        assert operators.K.shape == (n_l, n_u)
        assert operators.Kadj.shape == (n_u, n_l)
        assert operators.mass_ul.shape == (n_u, n_l)

    def test_trace_solution_lengths(self, p1_level2):
        with pytest.raises(ContractViolationError):
            TraceSolution(np.zeros(3), np.zeros(p1_level2.dof_count), p1_level2, p1_level2, K)


class TestSolve:
    def test_p1_p1(self, quad_config):
        system, solution, report, errors = _solve(2, SpaceKind.P1_CONTINUOUS, quad_config)
        assert report.converged
        assert report.iterations <= 60
        assert report.final_residual <= 1e-5
        assert dirichlet_residual(system, solution.u_coeffs, solution.lambda_coeffs) < 1e-3
        assert errors.rel_l2_u < 0.3
        assert errors.rel_l2_lambda < 0.5
        assert not errors.absolute

    def test_p1_dp0(self, quad_config):
        system, solution, report, errors = _solve(2, SpaceKind.DP0, quad_config)
        assert report.converged
        assert solution.lambda_coeffs.shape == (system.mesh.n_triangles,)
        assert errors.rel_l2_lambda < 0.6

    def test_inverse_h_scaling(self, quad_config):
        penalty = PenaltyParameter(beta_re=0.5, beta_im=-0.5, scaling=PenaltyScaling.INVERSE_H)
        system, _, report, _ = _solve(1, SpaceKind.P1_CONTINUOUS, quad_config, penalty)
        assert report.converged
        assert_allclose(system.beta, (0.5 - 0.5j) / system.mesh.h_max)

    def test_conjugated_system_gives_conjugate_solution(self, p1_level2, calderon_level2):
        assembler, operators = calderon_level2
        data = PointSourceData(k=K)
        system = build_dirichlet_system(p1_level2.mesh, p1_level2, p1_level2, K, PENALTY, data.dirichlet_trace, operators=operators)
        mirrored = build_dirichlet_system(
            p1_level2.mesh, p1_level2, p1_level2, K, PENALTY.conjugate(),
            lambda points, normals: np.conj(data.dirichlet_trace(points, normals)),
            operators=operators.conjugate(),
        )
        assert_allclose(mirrored.rhs, system.rhs.conj(), rtol=1e-13)
        solution, _ = solve_dirichlet(system, tol=1e-10, preconditioner=assembler.preconditioner)
        conjugate, _ = solve_dirichlet(mirrored, tol=1e-10, preconditioner=assembler.preconditioner)
        assert_allclose(conjugate.u_coeffs, solution.u_coeffs.conj(), rtol=1e-6, atol=1e-8)
        assert_allclose(conjugate.lambda_coeffs, solution.lambda_coeffs.conj(), rtol=1e-6, atol=1e-8)

    @pytest.mark.slow
    def test_refinement_reduces_error(self, quad_config):
        coarse = _solve(2, SpaceKind.P1_CONTINUOUS, quad_config)[3]
        fine = _solve(3, SpaceKind.P1_CONTINUOUS, quad_config)[3]
        assert fine.rel_l2_lambda < coarse.rel_l2_lambda
        assert fine.rel_l2_lambda < 0.2


class TestCalderonResidual:
    def test_exact_traces_nearly_satisfy_identity(self, calderon_level2):
        _, operators = calderon_level2
        exact, _ = _exact_traces(2)
        residual = calderon_residual(operators, exact.u_coeffs, exact.lambda_coeffs)
        wrong = calderon_residual(operators, exact.u_coeffs, -exact.lambda_coeffs)
        assert residual < 0.5 * wrong

    def test_decreases_with_refinement(self, calderon_level2, quad_config):
        _, operators2 = calderon_level2
        exact2, _ = _exact_traces(2)
        exact1, _ = _exact_traces(1)
        space1 = exact1.space_u
        operators1 = CalderonAssembler(space1, space1, quad_config).assemble(K)
        residual1 = calderon_residual(operators1, exact1.u_coeffs, exact1.lambda_coeffs)
        residual2 = calderon_residual(operators2, exact2.u_coeffs, exact2.lambda_coeffs)
        assert residual2 < residual1

    @pytest.mark.slow
    def test_monotone_over_levels_two_to_four(self, quad_config):
        residuals = []
        for level in (2, 3, 4):
            exact, _ = _exact_traces(level)
            operators = CalderonAssembler(exact.space_u, exact.space_lambda, quad_config).assemble(K)
            residuals.append(calderon_residual(operators, exact.u_coeffs, exact.lambda_coeffs))
        assert residuals[0] > residuals[1] > residuals[2]


class TestInterpolation:
    def test_p1_at_vertices(self, p1_level2):
        values = interpolate(p1_level2, lambda points, normals: points[:, 2] + 1j * normals[:, 0])
        mesh = p1_level2.mesh
        assert_allclose(values, mesh.vertices[:, 2] + 1j * mesh.vertices[:, 0], atol=1e-14)

    def test_dp0_at_centroids(self, dp0_level2):
        values = interpolate(dp0_level2, lambda points, normals: points[:, 0])
        assert_allclose(values.real, dp0_level2.mesh.centroids[:, 0])

    def test_dp1_at_corners(self, level1_mesh):
        space = build_space(level1_mesh, SpaceKind.DP1)
        values = interpolate(space, lambda points, normals: points[:, 1])
        assert values.shape == (240,)
        assert_allclose(values.reshape(-1, 3).real, level1_mesh.vertices[level1_mesh.triangles][:, :, 1])

    def test_interpolated_traces_error_small(self):
        exact, data = _exact_traces(3)
        errors = relative_error(exact, data.dirichlet_trace, data.neumann_trace)
        assert errors.rel_l2_u < 0.1
        assert errors.rel_l2_lambda < 0.2


class TestRepresentation:
    def test_exterior_and_interior(self):
        exact, data = _exact_traces(3)
        outside = np.array([[2.0, 0.0, 0.0]])
        field = evaluate_representation(exact, np.vstack([outside, np.zeros((1, 3))]))
        expected = data.field(outside)[0]
        assert abs(field.values[0] - expected) / abs(expected) < 0.1
        assert abs(field.values[1]) < 0.1 * abs(expected)
        assert not field.has_warnings

    def test_near_surface_flagged(self):
        exact, _ = _exact_traces(2)
        field = evaluate_representation(exact, np.array([[1.05, 0.0, 0.0], [3.0, 0.0, 0.0]]))
        assert field.near_surface.tolist() == [True, False]
        assert field.has_warnings

    @pytest.mark.slow
    def test_level4_accuracy(self):
        exact, data = _exact_traces(4)
        outside = np.array([[2.0, 0.0, 0.0]])
        field = evaluate_representation(exact, np.vstack([outside, np.zeros((1, 3))]))
        expected = data.field(outside)[0]
        assert abs(field.values[0] - expected) / abs(expected) <= 0.01
        assert abs(field.values[1]) <= 0.01 * abs(expected)
