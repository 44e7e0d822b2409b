"""2x2 blocked operators over (Dirichlet trace, Neumann trace) coefficient vectors."""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from weakbem.exceptions import ContractViolationError


@dataclass(frozen=True, eq=False)
class OperatorBlock:
    """
    scale * D (or scale * D^T) + sparse, with any part optional.

    Holding the scale and transpose flag avoids copying dense operator matrices.
    """
    shape: Tuple[int, int]
    dense: Optional[np.ndarray] = None
    scale: complex = 1.0
    transpose: bool = False
    sparse: Optional[sp.spmatrix] = None

    def __post_init__(self):
        if self.dense is not None:
            dense_shape = self.dense.shape[::-1] if self.transpose else self.dense.shape
            if tuple(dense_shape) != tuple(self.shape):
                raise ContractViolationError(f"dense block has shape {dense_shape}, expected {self.shape}")
        if self.sparse is not None and tuple(self.sparse.shape) != tuple(self.shape):
            raise ContractViolationError(f"sparse block has shape {self.sparse.shape}, expected {self.shape}")

    def apply(self, x: np.ndarray) -> np.ndarray:
        result = np.zeros(self.shape[0], dtype=np.complex128)
        if self.dense is not None:
            matrix = self.dense.T if self.transpose else self.dense
            result += self.scale * (matrix @ x)
        if self.sparse is not None:
            result += self.sparse @ x
        return result

    def to_dense(self) -> np.ndarray:
        result = np.zeros(self.shape, dtype=np.complex128)
        if self.dense is not None:
            result += self.scale * (self.dense.T if self.transpose else self.dense)
        if self.sparse is not None:
            result += self.sparse.toarray()
        return result


class BlockOperator:
    """Operator [[uu, u_lambda], [lambda_u, lambda_lambda]] acting on (u, lambda)."""

    def __init__(self, blocks: Sequence[Sequence[OperatorBlock]]):
        if len(blocks) != 2 or any(len(row) != 2 for row in blocks):
            raise ContractViolationError("block operator needs a 2x2 layout")
        self.blocks = tuple(tuple(row) for row in blocks)
        self.row_sizes = (self.blocks[0][0].shape[0], self.blocks[1][0].shape[0])
        self.col_sizes = (self.blocks[0][0].shape[1], self.blocks[0][1].shape[1])
        for i in range(2):
            for j in range(2):
                if self.blocks[i][j].shape != (self.row_sizes[i], self.col_sizes[j]):
                    raise ContractViolationError(
                        f"block ({i}, {j}) has shape {self.blocks[i][j].shape}, "
                        f"expected {(self.row_sizes[i], self.col_sizes[j])}"
                    )

    @property
    def shape(self) -> Tuple[int, int]:
        return sum(self.row_sizes), sum(self.col_sizes)

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Split a column-space vector into its u and lambda parts."""
        return x[:self.col_sizes[0]], x[self.col_sizes[0]:]

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.shape[1],):
            raise ContractViolationError(f"vector of shape {x.shape} does not match operator shape {self.shape}")
        parts = self.split(x)
        rows = [
            self.blocks[i][0].apply(parts[0]) + self.blocks[i][1].apply(parts[1])
            for i in range(2)
        ]
        return np.concatenate(rows)

    def __matmul__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)

    def to_dense(self) -> np.ndarray:
        return np.block([[block.to_dense() for block in row] for row in self.blocks])

    @classmethod
    def from_dense_blocks(cls, uu, u_lambda, lambda_u, lambda_lambda) -> "BlockOperator":
        """Convenience constructor from four plain arrays."""
        arrays = [[uu, u_lambda], [lambda_u, lambda_lambda]]
        return cls([
            [OperatorBlock(shape=np.shape(a), dense=np.asarray(a, dtype=np.complex128)) for a in row]
            for row in arrays
        ])
