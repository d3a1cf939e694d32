from __future__ import annotations

import csv
import json
import math
import logging
from typing import Any
from pathlib import Path
from dataclasses import dataclass

import numpy as np

# Project
from core.linalg import as_vector, as_matrix
from core.models import RealVector, RealMatrix
from core.exceptions import ParseError, RaggedRows, MatrixIOError, DimensionMismatch

__all__ = [
    "MatrixFile",
    "read_matrix",
    "read_vector",
    "write_report",
    "load_report",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatrixFile:
    path: Path | str
    has_header: bool = False
    delimiter: str = ","


def _parse_cell(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(row, col, cell) from None
    if not math.isfinite(value):
        raise ParseError(row, col, cell)
    return value


def read_matrix(f: MatrixFile) -> RealMatrix:
    """
    Reads a delimited text file into a finite rectangular matrix.
    Rows and columns in errors are 1-based positions in the file, the header line included.
    Blank lines are skipped.
    """
    try:
        with open(f.path, newline="", encoding="utf-8") as handle:
            lines = list(csv.reader(handle, delimiter=f.delimiter))
    except (OSError, UnicodeDecodeError) as e:
        raise MatrixIOError(f"cannot read {str(f.path)!r}: {e}") from e
    except csv.Error as e:
        raise MatrixIOError(f"malformed delimited text in {str(f.path)!r}: {e}") from e

    rows: list[list[float]] = []
    width = None
    for line_number, cells in enumerate(lines, start=1):
        if f.has_header and line_number == 1:
            continue
        if not cells or all(not cell.strip() for cell in cells):
            continue
        row = [_parse_cell(cell, line_number, col) for col, cell in enumerate(cells, start=1)]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRows(f"row {line_number} of {str(f.path)!r} has {len(row)} cells, expected {width}")
        rows.append(row)

    if not rows:
        raise MatrixIOError(f"{str(f.path)!r} holds no data rows")
    matrix = as_matrix(rows)
    logger.info(f"Read {f.path}: shape={matrix.shape}")
    return matrix


def read_vector(f: MatrixFile) -> RealVector:
    """A 1 x n or n x 1 file read as a flat vector."""
    matrix = read_matrix(f)
    if 1 not in matrix.shape:
        raise DimensionMismatch(f"{str(f.path)!r} holds a {matrix.shape[0]}x{matrix.shape[1]} matrix, expected one row or one column")
    return as_vector(matrix.ravel())


def _plain(value: Any) -> Any:
    match value:
        case np.ndarray():
            return value.tolist()
        case np.generic():
            return value.item()
        case dict():
            return {key: _plain(item) for key, item in value.items()}
        case list() | tuple():
            return [_plain(item) for item in value]
        case _:
            return value


def write_report(report: Any, path: Path | str) -> None:
    """
    Dumps a report (a RunReport or any mapping) as JSON. Floats keep Python's shortest
    round-trip repr, so identical runs give byte-identical files.
    """
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(_plain(payload), handle, indent=2, allow_nan=False)
            handle.write("\n")
    except OSError as e:
        raise MatrixIOError(f"cannot write report to {str(path)!r}: {e}") from e
    logger.info(f"Report written to {path}")


def load_report(path: Path | str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise MatrixIOError(f"cannot read report {str(path)!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise MatrixIOError(f"{str(path)!r} is not a JSON report: {e}") from e
