"""CSV ingestion and structured output rendering."""

import csv
import io as _io
import json
import math

import numpy as np

from .model import Dataset, validate_dataset

__all__ = ["load_csv", "add_intercept", "emit_table", "format_number"]

INTERCEPT_NAME = "b1_intercept"


def add_intercept(dataset):
    """Prepend an all-ones column (named 'b1_intercept') to a Dataset."""
    if INTERCEPT_NAME in dataset.names:
        raise ValueError("duplicate-name: dataset already has %r" % INTERCEPT_NAME)
    ones = np.ones((dataset.n, 1))
    return Dataset(
        x=np.hstack([ones, dataset.x]),
        y=dataset.y,
        names=(INTERCEPT_NAME,) + dataset.names,
    )


def load_csv(path, target_column, intercept=False):
    """Read a header-first CSV into a Dataset.

    The ``target_column`` becomes y; every remaining column becomes a
    predictor, in header order, and must be numeric.  ``intercept=True``
    prepends an all-ones column named 'b1_intercept'.

    Raises ValueError for an empty file ("empty-file"), a header without
    the target ("missing-target"), or an unparseable cell
    ("non-numeric-cell", with 1-based row number and column name).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError("empty-file: %s has no rows" % path)
    header = [h.strip() for h in rows[0]]
    if target_column not in header:
        raise ValueError(
            "missing-target: column %r not in header %s" % (target_column, header)
        )
    if len(rows) < 2:
        raise ValueError("empty-file: %s has a header but no data rows" % path)
    t = header.index(target_column)
    xnames = tuple(h for i, h in enumerate(header) if i != t)

    def parse(cell, rowno, col):
        try:
            v = float(cell)
        except ValueError:
            raise ValueError(
                "non-numeric-cell: row %d, column %r: %r" % (rowno, col, cell)
            ) from None
        if not math.isfinite(v):
            raise ValueError(
                "non-numeric-cell: row %d, column %r: %r is not finite"
                % (rowno, col, cell)
            )
        return v

    y = []
    x = []
    for rowno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(
                "non-numeric-cell: row %d has %d cells for %d header columns"
                % (rowno, len(row), len(header))
            )
        y.append(parse(row[t], rowno, target_column))
        x.append(
            [parse(c, rowno, header[i]) for i, c in enumerate(row) if i != t]
        )
    data = Dataset(x=np.array(x), y=np.array(y), names=xnames)
    validate_dataset(data)
    return add_intercept(data) if intercept else data


def format_number(v):
    """Render a float with 6 significant digits ('%.6g')."""
    return "%.6g" % v


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_number(v)
    return str(v)


def emit_table(rows, fmt, columns=None):
    """Render a list of mappings as 'table', 'csv', or 'json' text.

    ``rows`` may be dicts or anything with ``_asdict``/dataclass fields
    already converted by the caller; keys are taken from ``columns`` or
    from the first row.  Numbers print with 6 significant digits; the json
    form keeps them numeric (rounded to the same precision).
    """
    if fmt not in ("table", "csv", "json"):
        raise ValueError("format must be 'table', 'csv' or 'json', got %r" % fmt)
    rows = [dict(r) for r in rows]
    if columns is None:
        columns = list(rows[0].keys()) if rows else []

    if fmt == "json":
        def jval(v):
            if isinstance(v, float):
                return float(format_number(v)) if math.isfinite(v) else None
            return v
        payload = [{k: jval(r[k]) for k in columns} for r in rows]
        return json.dumps(payload, indent=2) + "\n"

    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(r[k]) for k in columns])
        return buf.getvalue()

    # aligned monospace table
    cells = [[_cell(r[k]) for k in columns] for r in rows]
    widths = [
        max([len(str(c))] + [len(row[i]) for row in cells])
        for i, c in enumerate(columns)
    ]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
