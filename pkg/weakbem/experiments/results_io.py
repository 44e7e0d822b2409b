"""Results CSV: fixed header, 12 significant digits, LF line endings, '#' summary lines."""
import csv
import io
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Union

from weakbem.config.logging_config import get_logger
from weakbem.exceptions import ConfigurationError
from weakbem.models.reports import ResultRow

logger = get_logger(__name__)

HEADER = ["experiment", "k", "beta_re", "beta_im", "h", "ndofs", "iterations", "converged", "err_u", "err_lambda", "time_s"]

_FLOAT_FIELDS = {"k", "beta_re", "beta_im", "h", "err_u", "err_lambda", "time_s"}
_INT_FIELDS = {"ndofs", "iterations"}


def _format(name: str, value) -> str:
    if name in _FLOAT_FIELDS:
        return format(float(value), ".12g")
    if name == "converged":
        return "true" if value else "false"
    return str(value)


def format_results(rows: Iterable[ResultRow], summary: Optional[Sequence[str]] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        data = row.model_dump()
        writer.writerow([_format(name, data[name]) for name in HEADER])
    for line in summary or []:
        buffer.write(f"# {line}\n")
    return buffer.getvalue()


def write_results(
    rows: Iterable[ResultRow],
    path: Union[str, Path, TextIO],
    summary: Optional[Sequence[str]] = None,
) -> None:
    """
    Write rows as CSV.

    Args:
        rows: Result rows in run order
        path: Output file, or an open text stream
        summary: Comment lines appended after the rows (written as '# ...')
    """
    text = format_results(rows, summary)
    if hasattr(path, "write"):
        path.write(text)
        return
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        raise OSError(f"cannot write results to {path}: {e}") from e
    logger.info("Results written", path=str(path))


def _parse(name: str, value: str):
    if name in _FLOAT_FIELDS:
        return float(value)
    if name in _INT_FIELDS:
        return int(value)
    if name == "converged":
        return value.strip().lower() == "true"
    return value


def read_results(path: Union[str, Path]) -> List[ResultRow]:
    """Parse a results CSV back into rows; comment lines are skipped."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise OSError(f"cannot read results from {path}: {e}") from e
    data_lines = [line for line in lines if line and not line.startswith("#")]
    reader = csv.reader(data_lines)
    header = next(reader, None)
    if header != HEADER:
        raise ConfigurationError(f"{path}: unexpected results header {header}")
    return [ResultRow(**{name: _parse(name, value) for name, value in zip(HEADER, record)}) for record in reader]
