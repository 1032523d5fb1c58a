"""
CSV ingestion and export, and metrics emission.

Data files have a header row; input columns and the target column are chosen
by name. A row with an empty or NaN target becomes a test point with an
unknown target.
"""

import csv
import math
import sys
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from ..core.exceptions import ParseError, ValidationError
from ..core.types import METRICS_COLUMNS, Dataset, MetricsRow


def _parse_cell(text: str, line: int, column: str, allow_missing: bool) -> float:
    stripped = (text or "").strip()
    if stripped == "" or stripped.lower() == "nan":
        if allow_missing:
            return math.nan
        raise ParseError(f"Missing value in column '{column}' on line {line}", line, column)
    try:
        value = float(stripped)
    except ValueError:
        raise ParseError(
            f"Non-numeric value {stripped!r} in column '{column}' on line {line}", line, column
        )
    if not math.isfinite(value):
        raise ParseError(f"Non-finite value in column '{column}' on line {line}", line, column)
    return value


def ingest_csv(
    path: Union[str, Path],
    x_columns: Sequence[str] = ("t",),
    y_column: str = "y",
) -> Dataset:
    """Read a dataset from CSV.

    Args:
        path: CSV file with a header row
        x_columns: Names of the input columns
        y_column: Name of the target column

    Returns:
        Dataset whose test split holds the rows with missing targets
        (``y_test`` is None)

    Raises:
        ParseError: On a missing column, a malformed cell (with line and column),
            or a file without training rows
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Data file not found: {path}")
    X_train: List[List[float]] = []
    y_train: List[float] = []
    X_gap: List[List[float]] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        for name in list(x_columns) + [y_column]:
            if name not in header:
                raise ParseError(f"Column '{name}' not found in header {header}", 1, name)
        for row in reader:
            line = reader.line_num
            x = [_parse_cell(row[c], line, c, allow_missing=False) for c in x_columns]
            y = _parse_cell(row[y_column], line, y_column, allow_missing=True)
            if math.isnan(y):
                X_gap.append(x)
            else:
                X_train.append(x)
                y_train.append(y)
    if not X_train:
        raise ParseError(f"{path} has no rows with observed targets")
    data = Dataset(
        np.asarray(X_train),
        np.asarray(y_train),
        X_test=np.asarray(X_gap) if X_gap else None,
    )
    bounds = ", ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in data.bounds())
    logger.info(f"Ingested {data.n} observed and {data.n_test} missing rows from {path}; bounds {bounds}")
    return data


def export_csv(
    data: Dataset,
    path: Union[str, Path],
    x_columns: Optional[Sequence[str]] = None,
    y_column: str = "y",
) -> Path:
    """Write training rows and test rows (targets or empty cells) to CSV.

    Rows are sorted by the first input column.
    """
    path = Path(path)
    if x_columns is None:
        x_columns = ["t"] if data.input_dim == 1 else [f"x{d}" for d in range(data.input_dim)]
    if len(x_columns) != data.input_dim:
        raise ValidationError(
            f"{len(x_columns)} column names for {data.input_dim} input dimensions",
            field="x_columns",
        )
    rows = [(list(x), float(y)) for x, y in zip(data.X, data.y)]
    if data.X_test is not None:
        targets = data.y_test if data.y_test is not None else [math.nan] * data.n_test
        rows.extend((list(x), float(y)) for x, y in zip(data.X_test, targets))
    rows.sort(key=lambda r: r[0][0])
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(list(x_columns) + [y_column])
        for x, y in rows:
            writer.writerow([repr(float(v)) for v in x] + ["" if math.isnan(y) else repr(y)])
    logger.debug(f"Exported {len(rows)} rows to {path}")
    return path


def format_value(value: object) -> str:
    """Metrics cell text: 12 significant digits, NaN as empty."""
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.12g}"
    return str(value)


def emit_metrics(rows: Iterable[MetricsRow], target: Union[str, Path, IO[str], None] = None) -> None:
    """Write metrics rows as CSV with the fixed column set.

    Args:
        rows: Metrics rows
        target: File path, open text stream, or None for stdout
    """
    rows = list(rows)
    if target is None or hasattr(target, "write"):
        stream = target if target is not None else sys.stdout
        _write_metrics(rows, stream)
        return
    with open(Path(target), "w", encoding="utf-8", newline="") as f:
        _write_metrics(rows, f)
    logger.info(f"Wrote {len(rows)} metrics rows to {target}")


def _write_metrics(rows: List[MetricsRow], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(METRICS_COLUMNS)
    for row in rows:
        writer.writerow([format_value(v) for v in row.values()])


def write_table(header: Sequence[str], rows: Iterable[Sequence[object]], path: Union[str, Path]) -> Path:
    """Write an auxiliary result table (e.g. kernel curves) as CSV."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_value(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return path
