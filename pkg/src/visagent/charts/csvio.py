"""CSV ingestion for point sets and parallel-coordinate rows."""

from __future__ import annotations

import csv

from ..errors import ConfigError
from .scatter import PointSet


def _read_table(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise ConfigError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    return header, body


def load_points_csv(path, x_col: str, y_col: str, label_col: str | None = None) -> PointSet:
    header, body = _read_table(path)
    try:
        xi, yi = header.index(x_col), header.index(y_col)
        li = header.index(label_col) if label_col else None
    except ValueError as exc:
        raise ConfigError(f"{path}: missing column ({exc})") from exc
    points = [(float(r[xi]), float(r[yi])) for r in body]
    labels = tuple(int(float(r[li])) for r in body) if li is not None else None
    return PointSet(points=tuple(points), labels=labels)


def load_rows_csv(path, columns=None):
    """Numeric rows for parallel coordinates; defaults to all columns."""
    header, body = _read_table(path)
    if columns is None:
        idx = list(range(len(header)))
    else:
        try:
            idx = [header.index(c) for c in columns]
        except ValueError as exc:
            raise ConfigError(f"{path}: missing column ({exc})") from exc
    return [[float(r[i]) for i in idx] for r in body]
