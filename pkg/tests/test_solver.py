import numpy as np
import pytest
import scipy.sparse as sp
from numpy.testing import assert_allclose

from weakbem.analytic.point_source import PointSourceData
from weakbem.exceptions import ContractViolationError, FactorizationError
from weakbem.formulation.dirichlet import build_dirichlet_system
from weakbem.formulation.penalty import PenaltyParameter
from weakbem.operators.mass import assemble_mass
from weakbem.solver.block_operator import BlockOperator, OperatorBlock
from weakbem.solver.gmres import gmres_solve, true_relative_residual
from weakbem.solver.preconditioner import MassFactor, build_preconditioner


def _test_matrix(n=40, seed=0):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A / np.sqrt(n) + 3.0 * np.eye(n)


class TestGmres:
    def test_matches_direct_solve(self):
        A = _test_matrix()
        b = np.random.default_rng(1).normal(size=40) + 0j
        x, report = gmres_solve(A, b, tol=1e-12, maxiter=200)
        assert report.converged
        assert report.iterations <= 40
        assert_allclose(x, np.linalg.solve(A, b), rtol=1e-9, atol=1e-10)

    def test_residual_history(self):
        A = _test_matrix(seed=2)
        b = np.ones(40, dtype=complex)
        x, report = gmres_solve(A, b, tol=1e-8)
        history = report.residual_history
        assert history[0] == 1.0
        assert len(history) == report.iterations + 1
        assert all(value > 0.0 for value in history)
        assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(history, history[1:]))
        assert report.final_residual <= 1e-8
        assert true_relative_residual(A, x, b) < 1e-6

    def test_left_preconditioner(self):
        rng = np.random.default_rng(3)
        D = np.diag(np.linspace(1.0, 1e4, 30))
        A = D @ (np.eye(30) + 0.1 * rng.normal(size=(30, 30)))
        b = rng.normal(size=30) + 1j * rng.normal(size=30)
        inverse_diagonal = 1.0 / np.diag(D)
        x, report = gmres_solve(A, b, P=lambda r: inverse_diagonal * r, tol=1e-10)
        assert report.converged
        assert_allclose(x, np.linalg.solve(A, b), rtol=1e-7, atol=1e-8)

    def test_zero_rhs(self):
        x, report = gmres_solve(_test_matrix(), np.zeros(40))
        assert report.converged
        assert report.iterations == 0
        assert report.residual_history == [1.0]
        assert np.all(x == 0.0)

    def test_not_converged_reported(self):
        A = _test_matrix(seed=5)
        x, report = gmres_solve(A, np.ones(40), tol=1e-14, maxiter=3)
        assert not report.converged
        assert report.iterations == 3
        assert len(report.residual_history) == 4
        assert np.all(np.isfinite(x))

    def test_happy_breakdown(self):
        A = np.diag([2.0, 2.0, 2.0, 5.0]).astype(complex)
        b = np.array([1.0, 1.0, 1.0, 0.0])
        x, report = gmres_solve(A, b, tol=1e-10)
        assert report.converged
        assert report.iterations == 1
        assert_allclose(x, b / 2.0)

    def test_exact_initial_guess(self):
        A = 2.0 * np.eye(5, dtype=complex)
        b = np.ones(5, dtype=complex)
        x, report = gmres_solve(A, b, x0=0.5 * b, tol=1e-8)
        assert report.iterations == 0
        assert report.converged
        assert_allclose(x, 0.5 * b)

    @pytest.mark.parametrize("kwargs", [{"tol": 0.0}, {"maxiter": 0}])
    def test_arguments(self, kwargs):
        with pytest.raises(ContractViolationError):
            gmres_solve(np.eye(2), np.ones(2), **kwargs)


class TestBlockOperator:
    def test_apply_matches_dense(self):
        rng = np.random.default_rng(7)
        blocks = [rng.normal(size=shape) + 1j * rng.normal(size=shape) for shape in [(4, 4), (4, 3), (3, 4), (3, 3)]]
        operator = BlockOperator.from_dense_blocks(*blocks)
        x = rng.normal(size=7) + 0j
        dense = np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]])
        assert operator.shape == (7, 7)
        assert_allclose(operator @ x, dense @ x)
        assert_allclose(operator.to_dense(), dense)

    def test_scaled_transposed_block(self):
        D = np.arange(6.0).reshape(2, 3)
        S = sp.csr_matrix(np.ones((3, 2)))
        block = OperatorBlock(shape=(3, 2), dense=D, scale=-2.0, transpose=True, sparse=S)
        x = np.array([1.0, -1.0])
        assert_allclose(block.apply(x), -2.0 * D.T @ x + S @ x)
        assert_allclose(block.to_dense(), -2.0 * D.T + 1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolationError):
            OperatorBlock(shape=(2, 2), dense=np.ones((2, 3)))
        with pytest.raises(ContractViolationError):
            BlockOperator.from_dense_blocks(np.ones((2, 2)), np.ones((2, 1)), np.ones((1, 3)), np.ones((1, 1)))
        operator = BlockOperator.from_dense_blocks(np.ones((2, 2)), np.ones((2, 1)), np.ones((1, 2)), np.ones((1, 1)))
        with pytest.raises(ContractViolationError):
            operator.apply(np.ones(4))


class TestPreconditioner:
    def test_inverse_mass(self, p1_level2, dp0_level2):
        mass_u = assemble_mass(p1_level2, p1_level2)
        mass_l = assemble_mass(dp0_level2, dp0_level2)
        preconditioner = build_preconditioner(mass_u, mass_l)
        rng = np.random.default_rng(8)
        x = rng.normal(size=p1_level2.dof_count) + 1j * rng.normal(size=p1_level2.dof_count)
        y = rng.normal(size=dp0_level2.dof_count) - 2j * rng.normal(size=dp0_level2.dof_count)
        r = np.concatenate([mass_u.entries @ x, mass_l.entries @ y])
        assert preconditioner.size == r.size
        assert_allclose(preconditioner(r), np.concatenate([x, y]), rtol=1e-10, atol=1e-10)

    def test_real_input(self, p1_level2):
        mass = assemble_mass(p1_level2, p1_level2)
        factor = MassFactor(mass)
        x = np.linspace(-1.0, 1.0, p1_level2.dof_count)
        assert_allclose(factor.solve(mass.entries @ x), x, atol=1e-10)

    def test_rejects_non_symmetric(self):
        with pytest.raises(FactorizationError, match="not symmetric"):
            MassFactor(sp.csr_matrix(np.array([[2.0, 1.0], [0.0, 2.0]])))

    def test_rejects_indefinite(self):
        with pytest.raises(FactorizationError):
            MassFactor(sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]])))

    def test_rejects_singular(self):
        with pytest.raises(FactorizationError):
            MassFactor(sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]])))


class TestDirichletSystemSolve:
    @pytest.fixture(scope="class")
    def dirichlet_system(self, p1_level2, calderon_level2):
        assembler, operators = calderon_level2
        data = PointSourceData(k=operators.k)
        system = build_dirichlet_system(
            p1_level2.mesh, p1_level2, p1_level2, operators.k, PenaltyParameter(beta_re=1.0, beta_im=-1.0),
            data.dirichlet_trace, operators=operators,
        )
        return system, assembler.preconditioner

    @pytest.mark.parametrize("tol", [1e-5, 1e-8])
    def test_unpreconditioned_residual(self, dirichlet_system, tol):
        system, preconditioner = dirichlet_system
        x, report = gmres_solve(system.operator, system.rhs, preconditioner, tol=tol, maxiter=500)
        assert report.converged
        assert report.final_residual <= tol
        # bounded by the condition number of the mass matrix, which is small on the icosphere
        assert true_relative_residual(system.operator, x, system.rhs) <= 10.0 * tol

    def test_iterations_invariant_under_permutation(self, dirichlet_system):
        system, preconditioner = dirichlet_system
        dense = system.operator.to_dense()
        n = system.rhs.size
        permutation = np.random.default_rng(11).permutation(n)

        def permuted_preconditioner(r):
            unpermuted = np.empty(n, dtype=complex)
            unpermuted[permutation] = r
            return preconditioner.apply(unpermuted)[permutation]

        _, report = gmres_solve(dense, system.rhs, preconditioner, tol=1e-6, maxiter=500)
        x, permuted = gmres_solve(
            dense[np.ix_(permutation, permutation)], system.rhs[permutation], permuted_preconditioner,
            tol=1e-6, maxiter=500,
        )
        assert report.converged and permuted.converged
        assert abs(report.iterations - permuted.iterations) <= 2
        unpermuted = np.empty(n, dtype=complex)
        unpermuted[permutation] = x
        assert true_relative_residual(dense, unpermuted, system.rhs) < 1e-4
