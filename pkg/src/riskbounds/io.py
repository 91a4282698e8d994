"""Reading measurement files."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path
from typing import Optional

from .errors import DataError
from .estimation import Sample


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_measurements(path, column: Optional[str] = None) -> Sample:
    """Read one numeric column of a CSV file into a Sample.

    A first row whose selected cell is not numeric is taken as the header and
    its cell becomes the unit label. Without a header the first column is used
    and `column` must be omitted or a 0-based index.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    rows = [row for row in csv.reader(text.splitlines()) if any(c.strip() for c in row)]
    if not rows:
        raise DataError(f"{path} is empty")

    first = [c.strip() for c in rows[0]]
    col = 0
    if column is not None and column.isdigit():
        col = int(column)
    has_header = col < len(first) and not _is_number(first[col])
    if column is not None and not column.isdigit():
        if column not in first:
            raise DataError(f"column {column!r} not found in header {first}")
        col = first.index(column)
        has_header = True
    unit = first[col] if has_header and col < len(first) else None
    body = rows[1:] if has_header else rows
    start_line = 2 if has_header else 1

    values = []
    for offset, row in enumerate(body):
        line = start_line + offset
        if col >= len(row) or not row[col].strip():
            raise DataError(f"row {line}: missing value in column {col}")
        cell = row[col].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise DataError(f"row {line}: non-numeric value {cell!r}") from None
    if len(values) < 2:
        raise DataError(f"{path} holds {len(values)} value(s); at least 2 are needed")
    return Sample(tuple(values), unit or None)


def sample_digest(sample: Sample) -> str:
    """sha256 over the repr of the values, independent of file formatting."""
    h = hashlib.sha256()
    for v in sample.values:
        h.update(repr(v).encode())
        h.update(b"\n")
    return h.hexdigest()


def measurement_warnings(sample: Sample) -> list:
    bad = [v for v in sample.values if v <= 0]
    if bad:
        return [f"{len(bad)} non-positive measurement value(s) kept in the analysis"]
    return []
