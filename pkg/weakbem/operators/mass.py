"""Sparse Gram matrices between trace spaces."""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from weakbem.config.logging_config import get_logger
from weakbem.operators.spaces import DofSpace, check_same_mesh

logger = get_logger(__name__)

# Reference integrals of products of local basis functions, divided by the triangle area.
_P1_P1 = np.array([
    [2.0, 1.0, 1.0],
    [1.0, 2.0, 1.0],
    [1.0, 1.0, 2.0],
]) / 12.0
_P1_P0 = np.full((3, 1), 1.0 / 3.0)
_P0_P0 = np.ones((1, 1))


def _local_mass(test_size: int, trial_size: int) -> np.ndarray:
    if test_size == 3 and trial_size == 3:
        return _P1_P1
    if test_size == 3:
        return _P1_P0
    if trial_size == 3:
        return _P1_P0.T
    return _P0_P0


@dataclass(frozen=True, eq=False)
class MassMatrix:
    """Entries m_ij = integral of trial_j * test_i over the surface."""
    entries: sp.csr_matrix
    trial: DofSpace
    test: DofSpace

    @property
    def shape(self):
        return self.entries.shape


def assemble_mass(trial: DofSpace, test: DofSpace) -> MassMatrix:
    """
    Exact mass matrix between two spaces on the same mesh.

    Args:
        trial: Column space
        test: Row space

    Returns:
        MassMatrix in CSR format with rows indexed by test dofs
    """
    mesh = check_same_mesh(trial, test)
    local = _local_mass(test.local_size, trial.local_size)
    blocks = mesh.areas[:, None, None] * local[None, :, :]

    rows = np.broadcast_to(test.local2global[:, :, None], blocks.shape).ravel()
    cols = np.broadcast_to(trial.local2global[:, None, :], blocks.shape).ravel()
    entries = sp.coo_matrix(
        (blocks.ravel(), (rows, cols)), shape=(test.dof_count, trial.dof_count)
    ).tocsr()
    entries.sum_duplicates()
    entries.sort_indices()
    logger.debug(
        "Mass matrix assembled",
        test=test.kind.value,
        trial=trial.kind.value,
        nnz=int(entries.nnz),
    )
    return MassMatrix(entries=entries, trial=trial, test=test)
