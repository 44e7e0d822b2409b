"""Binary dump of dense complex matrices.

Layout: rows and cols as little-endian int64, then rows * cols complex128
values (little-endian real, imaginary) in row-major order.
"""
from pathlib import Path
from typing import Union

import numpy as np

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import MatrixDumpError

logger = get_logger(__name__)

_HEADER = np.dtype("<i8")
_VALUE = np.dtype("<c16")


def write_matrix_dump(path: Union[str, Path], matrix: np.ndarray) -> None:
    """Write a 2-D matrix as a 16-byte header followed by row-major complex doubles."""
    path = Path(path)
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise MatrixDumpError(f"matrix dump needs a 2-D array, got {matrix.ndim} dimensions")
    header = np.array(matrix.shape, dtype=_HEADER)
    try:
        with path.open("wb") as handle:
            handle.write(header.tobytes())
            handle.write(np.ascontiguousarray(matrix, dtype=_VALUE).tobytes())
    except OSError as e:
        raise MatrixDumpError(f"cannot write matrix dump {path}: {e}") from e
    logger.debug("Matrix dumped", path=str(path), shape=list(matrix.shape))


def read_matrix_dump(path: Union[str, Path]) -> np.ndarray:
    """Read a matrix written by write_matrix_dump."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise MatrixDumpError(f"cannot read matrix dump {path}: {e}") from e
    if len(raw) < 16:
        raise MatrixDumpError(f"{path}: file shorter than the 16-byte header")
    rows, cols = (int(v) for v in np.frombuffer(raw[:16], dtype=_HEADER))
    expected = 16 + rows * cols * _VALUE.itemsize
    if rows < 0 or cols < 0 or len(raw) != expected:
        raise MatrixDumpError(f"{path}: header says {rows}x{cols}, file has {len(raw)} bytes")
    return np.frombuffer(raw[16:], dtype=_VALUE).astype(np.complex128).reshape(rows, cols)
