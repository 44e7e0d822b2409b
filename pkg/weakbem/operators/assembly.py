"""Dense Galerkin assembly of the single layer, double layer, adjoint double layer and hypersingular operators.

Kernels (x on the test triangle, y on the trial triangle, G the Helmholtz Green's function):
    V     G(x, y)
    K     dG/dn_y(x, y)
    Kadj  dG/dn_x(x, y)
    W     G(x, y) [curl v(x) . curl u(y) - k^2 (n_x . n_y) v(x) u(y)]   (integrated by parts)

Touching pairs use the regularizing pair rules with the lower-indexed triangle in the
first rule slot, so a pair and its mirror see the same quadrature points. Close
disjoint pairs use a tensor rule of doubled order. All other pairs run through the
compiled regular pass in fixed chunks of test triangles.
"""
import time
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numba
import numpy as np
import scipy.sparse as sp

from weakbem.config.logging_config import get_logger
from weakbem.config.settings import get_settings
from weakbem.exceptions import AssemblyError, ContractViolationError
from weakbem.geometry.mesh import Mesh
from weakbem.models.enums import OperatorKind, PairTag, SpaceKind
from weakbem.operators import _numba_kernels
from weakbem.operators.spaces import DofSpace, check_same_mesh
from weakbem.quadrature.config import QuadratureConfig
from weakbem.quadrature.near_field import near_pairs
from weakbem.quadrature.singular import PairRule, singular_rule, tensor_rule
from weakbem.quadrature.triangle import gauss_triangle

logger = get_logger(__name__)

_SLOT_ORDER = (OperatorKind.V, OperatorKind.K, OperatorKind.KADJ, OperatorKind.W)

_TAG_BY_COUNT = {
    3: PairTag.COINCIDENT,
    2: PairTag.EDGE_ADJACENT,
    1: PairTag.VERTEX_ADJACENT,
}


@dataclass(frozen=True, eq=False)
class BoundaryOperatorMatrix:
    """Dense Galerkin matrix: rows are test dofs, columns trial dofs."""
    kind: OperatorKind
    entries: np.ndarray
    trial: DofSpace
    test: DofSpace
    k: float

    @property
    def shape(self):
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class PairBatchPlan:
    """Triangle pairs integrated with one pair rule."""
    label: str
    rule: PairRule
    tri_x: np.ndarray
    tri_y: np.ndarray
    perm_x: np.ndarray
    perm_y: np.ndarray
    swap: np.ndarray

    @property
    def size(self) -> int:
        return int(self.tri_x.size)


def _touching_plans(mesh: Mesh, singular_order: int) -> List[PairBatchPlan]:
    """Group all touching ordered pairs by tag, with shared vertices moved to the front."""
    rows, cols, counts = mesh.touching_pairs()
    first = np.minimum(rows, cols)
    second = np.maximum(rows, cols)
    tri_first = mesh.triangles[first]
    tri_second = mesh.triangles[second]

    matches = tri_first[:, :, None] == tri_second[:, None, :]
    shared_in_first = matches.any(axis=2)
    partner = matches.argmax(axis=2)

    perm_first = np.argsort(~shared_in_first, axis=1, kind="stable")
    partner_in_order = np.take_along_axis(partner, perm_first, axis=1)
    perm_second = np.tile(np.arange(3), (rows.size, 1))

    edge = counts == 2
    perm_second[edge, 0] = partner_in_order[edge, 0]
    perm_second[edge, 1] = partner_in_order[edge, 1]
    perm_second[edge, 2] = 3 - perm_second[edge, 0] - perm_second[edge, 1]

    vertex = counts == 1
    perm_second[vertex, 0] = partner_in_order[vertex, 0]
    perm_second[vertex, 1] = (perm_second[vertex, 0] + 1) % 3
    perm_second[vertex, 2] = (perm_second[vertex, 0] + 2) % 3

    coincident = counts == 3
    perm_first[coincident] = np.arange(3)

    swap = rows != first
    perm_x = np.where(swap[:, None], perm_second, perm_first)
    perm_y = np.where(swap[:, None], perm_first, perm_second)

    plans = []
    for count, tag in _TAG_BY_COUNT.items():
        selected = counts == count
        if not np.any(selected):
            continue
        plans.append(PairBatchPlan(
            label=tag.value,
            rule=singular_rule(tag, singular_order),
            tri_x=np.ascontiguousarray(rows[selected]),
            tri_y=np.ascontiguousarray(cols[selected]),
            perm_x=np.ascontiguousarray(perm_x[selected], dtype=np.int64),
            perm_y=np.ascontiguousarray(perm_y[selected], dtype=np.int64),
            swap=np.ascontiguousarray(swap[selected]),
        ))
    return plans


def _near_plan(mesh: Mesh, quad_config: QuadratureConfig) -> Optional[PairBatchPlan]:
    rows, cols = near_pairs(mesh, quad_config.near_field_factor)
    if rows.size == 0:
        return None
    rule = gauss_triangle(quad_config.near_order)
    identity = np.tile(np.arange(3, dtype=np.int64), (rows.size, 1))
    return PairBatchPlan(
        label="near_field",
        rule=tensor_rule(rule, rule),
        tri_x=rows,
        tri_y=cols,
        perm_x=identity,
        perm_y=identity.copy(),
        swap=np.zeros(rows.size, dtype=bool),
    )


class OperatorAssembler:
    """
    Pair schedule and regular quadrature data for one (trial, test) space pair.

    The schedule depends only on the mesh and the quadrature configuration, so one
    assembler serves any number of wavenumbers.
    """

    def __init__(
        self,
        trial: DofSpace,
        test: DofSpace,
        quad_config: Optional[QuadratureConfig] = None,
        threads: Optional[int] = None,
    ):
        settings = get_settings()
        self.mesh = check_same_mesh(trial, test)
        self.trial = trial
        self.test = test
        self.quad_config = quad_config or QuadratureConfig.from_settings(settings)
        self.threads = threads or settings.threads
        self.chunk_size = settings.assembly_chunk_size
        self.batch_size = settings.singular_batch_size

        mesh = self.mesh
        self.plans = _touching_plans(mesh, self.quad_config.singular_order)
        near = _near_plan(mesh, self.quad_config)
        if near is not None:
            self.plans.append(near)

        special_rows = np.concatenate([plan.tri_x for plan in self.plans])
        special_cols = np.concatenate([plan.tri_y for plan in self.plans])
        special = sp.csr_matrix(
            (np.ones(special_rows.size), (special_rows, special_cols)),
            shape=(mesh.n_triangles, mesh.n_triangles),
        )
        special.sum_duplicates()
        special.sort_indices()
        self._special_indptr = special.indptr.astype(np.int64)
        self._special_indices = special.indices.astype(np.int64)

        rule = gauss_triangle(self.quad_config.regular_order)
        corners = mesh.vertices[mesh.triangles]
        self._points = np.ascontiguousarray(np.einsum("qa,tad->tqd", rule.points, corners))
        self._weights = np.ascontiguousarray(2.0 * mesh.areas[:, None] * rule.weights[None, :])
        self._basis_test = np.ascontiguousarray(test.basis_values(rule.points))
        self._basis_trial = np.ascontiguousarray(trial.basis_values(rule.points))
        if trial.local_size == 3 and test.local_size == 3:
            self._curls = np.ascontiguousarray(trial.surface_curls)
        else:
            self._curls = np.zeros((mesh.n_triangles, 3, 3))

        logger.info(
            "Assembly schedule built",
            n_triangles=mesh.n_triangles,
            test_dofs=test.dof_count,
            trial_dofs=trial.dof_count,
            **{f"{plan.label}_pairs": plan.size for plan in self.plans},
        )

    def _check_kinds(self, kinds: Sequence[OperatorKind]) -> None:
        if OperatorKind.W in kinds:
            if self.trial.kind != SpaceKind.P1_CONTINUOUS or self.test.kind != SpaceKind.P1_CONTINUOUS:
                raise ContractViolationError(
                    "the hypersingular operator needs P1_continuous trial and test spaces, "
                    f"got trial={self.trial.kind.value} test={self.test.kind.value}"
                )

    def _regular_pass(self, matrices: np.ndarray, slots: np.ndarray, k: float) -> None:
        nt = self.mesh.n_triangles
        n_slots = matrices.shape[0]
        test_l2g = np.ascontiguousarray(self.test.local2global)
        trial_l2g = np.ascontiguousarray(self.trial.local2global)
        for start in range(0, nt, self.chunk_size):
            chunk = np.arange(start, min(start + self.chunk_size, nt), dtype=np.int64)
            out, bad = _numba_kernels.regular_chunk(
                chunk, self._points, self._weights, self._basis_test, self._basis_trial,
                self.mesh.normals, self._curls, test_l2g, trial_l2g, self.trial.dof_count,
                self._special_indptr, self._special_indices, slots, n_slots, k,
            )
            failed = np.nonzero(bad >= 0)[0]
            if failed.size:
                c = int(failed[0])
                raise AssemblyError(
                    f"non-finite entry for triangle pair ({chunk[c]}, {bad[c]})",
                    test_triangle=int(chunk[c]),
                    trial_triangle=int(bad[c]),
                )
            rows = test_l2g[chunk]
            for s in range(n_slots):
                np.add.at(matrices[s], rows, out[s])

    def _pair_pass(self, plan: PairBatchPlan, matrices: np.ndarray, slots: np.ndarray, k: float) -> None:
        mesh = self.mesh
        n_slots = matrices.shape[0]
        nloc_test = self.test.local_size
        nloc_trial = self.trial.local_size
        for start in range(0, plan.size, self.batch_size):
            batch = slice(start, start + self.batch_size)
            tri_x = plan.tri_x[batch]
            tri_y = plan.tri_y[batch]
            out = _numba_kernels.pair_batch(
                tri_x, tri_y, plan.perm_x[batch], plan.perm_y[batch], plan.swap[batch],
                plan.rule.points, plan.rule.weights,
                mesh.vertices, mesh.triangles, mesh.normals, mesh.areas, self._curls,
                nloc_test, nloc_trial, slots, n_slots, k,
            )
            finite = np.isfinite(out).all(axis=(1, 2, 3))
            if not finite.all():
                p = int(np.argmin(finite))
                raise AssemblyError(
                    f"non-finite entry for {plan.label} pair ({tri_x[p]}, {tri_y[p]})",
                    test_triangle=int(tri_x[p]),
                    trial_triangle=int(tri_y[p]),
                )
            rows = self.test.local2global[tri_x][:, :, None]
            cols = self.trial.local2global[tri_y][:, None, :]
            for s in range(n_slots):
                np.add.at(matrices[s], (rows, cols), out[:, s, :nloc_test, :nloc_trial])

    def assemble(self, kinds: Iterable, k: float) -> Dict[OperatorKind, BoundaryOperatorMatrix]:
        """
        Assemble several operator kinds in one pass.

        Args:
            kinds: Operator kinds (V, K, Kadj, W)
            k: Wavenumber (> 0)

        Returns:
            Mapping from kind to its matrix
        """
        kinds = list(dict.fromkeys(OperatorKind(kind) for kind in kinds))
        if not kinds:
            raise ContractViolationError("no operator kind requested")
        if not k > 0.0:
            raise ContractViolationError(f"wavenumber must be positive, got {k}")
        self._check_kinds(kinds)

        slots = np.full(4, -1, dtype=np.int64)
        for slot, kind in enumerate(kinds):
            slots[_SLOT_ORDER.index(kind)] = slot

        available = numba.config.NUMBA_NUM_THREADS
        numba.set_num_threads(max(1, min(int(self.threads), available)))

        started = time.perf_counter()
        matrices = np.zeros((len(kinds), self.test.dof_count, self.trial.dof_count), dtype=np.complex128)
        self._regular_pass(matrices, slots, float(k))
        for plan in self.plans:
            self._pair_pass(plan, matrices, slots, float(k))

        logger.info(
            "Operators assembled",
            kinds=[kind.value for kind in kinds],
            k=k,
            shape=list(matrices.shape[1:]),
            threads=numba.get_num_threads(),
            wall_time=round(time.perf_counter() - started, 3),
        )
        return {
            kind: BoundaryOperatorMatrix(kind=kind, entries=matrices[slot], trial=self.trial, test=self.test, k=float(k))
            for slot, kind in enumerate(kinds)
        }


def assemble_calderon_operators(
    kinds: Iterable,
    trial: DofSpace,
    test: DofSpace,
    k: float,
    quad_config: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
) -> Dict[OperatorKind, BoundaryOperatorMatrix]:
    """Assemble several boundary operators between the same spaces, sharing kernel evaluations."""
    return OperatorAssembler(trial, test, quad_config, threads).assemble(kinds, k)


def assemble_boundary_operator(
    kind,
    trial: DofSpace,
    test: DofSpace,
    k: float,
    quad_config: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
) -> BoundaryOperatorMatrix:
    """
    Assemble one boundary operator.

    Args:
        kind: V, K, Kadj or W
        trial: Trial space (columns)
        test: Test space (rows)
        k: Wavenumber (> 0)
        quad_config: Quadrature orders (defaults from settings)
        threads: Worker threads (defaults from settings)

    Returns:
        BoundaryOperatorMatrix
    """
    kind = OperatorKind(kind)
    return assemble_calderon_operators([kind], trial, test, k, quad_config, threads)[kind]
