"""Reading residual matrices from delimited text files.

The only accepted input format is plain delimited text: one row per line,
numeric cells, optional header line and optional leading label column.
Anything non-rectangular or non-finite is rejected with the exact file
position; silently imputing missing residuals would change the null
distribution of the test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ebr import ResidualMatrix

ORIENTATIONS = ("units_rows", "periods_rows")


class ParseError(ValueError):
    """Malformed input file; carries the 1-based (line, column) position."""

    def __init__(self, path: Path, message: str, line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = str(path)
        if line is not None:
            where += f", line {line}"
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class IngestSpec:
    """How to read one delimited residual file."""

    path: Path | str
    delimiter: str = ","
    has_header: bool = False
    has_row_labels: bool = False
    orientation: str = "units_rows"

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1:
            raise ValueError(f"delimiter must be a single character, got {self.delimiter!r}")
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}")


def ingest(spec: IngestSpec) -> ResidualMatrix:
    """Parse the file into a units-by-periods residual matrix."""
    path = Path(spec.path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    start = 1 if spec.has_header else 0
    rows: list[list[float]] = []
    width: int | None = None
    for line_no, line in enumerate(lines[start:], start=start + 1):
        cells = line.split(spec.delimiter)
        label_offset = 1 if spec.has_row_labels else 0
        if len(cells) <= label_offset:
            raise ParseError(path, "row has no data cells", line=line_no)
        row = []
        for col_idx, token in enumerate(cells[label_offset:], start=label_offset + 1):
            token = token.strip()
            try:
                value = float(token)
            except ValueError:
                raise ParseError(path, f"non-numeric cell {token!r}", line=line_no, column=col_idx) from None
            if not math.isfinite(value):
                raise ParseError(path, f"non-finite cell {token!r}", line=line_no, column=col_idx)
            row.append(value)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                path, f"ragged row: expected {width} data cells, found {len(row)}", line=line_no
            )
        rows.append(row)
    if not rows:
        raise ParseError(path, "file contains no data rows")
    values = np.array(rows, dtype=float)
    if spec.orientation == "periods_rows":
        values = values.T.copy()
    return ResidualMatrix(values, label=str(path))


def write_matrix(values: np.ndarray, path: Path | str, delimiter: str = ",") -> None:
    """Write a matrix in full precision so re-ingesting is bitwise exact."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValueError(f"expected a 2-d array, got ndim={values.ndim}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [delimiter.join(repr(float(v)) for v in row) for row in values]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
