"""Parallel-coordinates rendering: one polyline per row over d vertical axes."""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import ConfigError, DegenerateColumnWarning
from .canvas import AXIS_GRAY, CanvasConfig, DrawTrace, pil_canvas


def render_parallel_coords(
    rows,
    canvas: CanvasConfig = CanvasConfig(),
    line_color=(31, 119, 180, 160),
    trace: DrawTrace | None = None,
) -> np.ndarray:
    """Render d evenly spaced vertical axes, each normalized to its column
    min/max, and one polyline per row. A constant column collapses to the
    axis midline (with a DegenerateColumnWarning)."""
    data = np.asarray(rows, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] < 2:
        raise ConfigError(f"need rows of >= 2 dimensions, got shape {data.shape}")
    n, d = data.shape

    lo = data.min(axis=0)
    hi = data.max(axis=0)
    span = hi - lo
    degenerate = span == 0.0
    if degenerate.any():
        cols = np.nonzero(degenerate)[0].tolist()
        warnings.warn(f"constant column(s) {cols} collapse to the axis midline", DegenerateColumnWarning)
    norm = np.where(degenerate[None, :], 0.5, (data - lo[None, :]) / np.where(degenerate, 1.0, span)[None, :])

    img, draw = pil_canvas(canvas)
    x0, y0, x1, y1 = canvas.plot_box
    axis_x = np.linspace(x0, x1, d)
    for ax in axis_x:
        draw.line([(ax, y0), (ax, y1)], fill=AXIS_GRAY, width=1)

    ys = y1 - norm * (y1 - y0)
    for i in range(n):
        pts = [(float(axis_x[j]), float(ys[i, j])) for j in range(d)]
        draw.line(pts, fill=tuple(line_color), width=1)
        if trace is not None:
            trace.polylines += 1
            trace.segments += d - 1

    return np.asarray(img, dtype=np.uint8)
