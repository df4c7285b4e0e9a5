"""Alpha-blended scatterplots with an exact coverage side channel.

The coverage buffer keeps the pre-quantization accumulated alpha per pixel:
for k coincident points at opacity o it equals 1 - (1-o)^k exactly, which is
what the overplot oracle reasons about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError, EmptyPointSet
from .canvas import PALETTE, CanvasConfig, DrawTrace, blank_image, data_to_pixel, draw_axes


@dataclass(frozen=True)
class PointSet:
    """2-D points with optional integer labels (cluster / class ids)."""

    points: tuple  # of (x, y) float pairs
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(x), float(y)) for x, y in self.points))
        for x, y in self.points:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ConfigError(f"non-finite point ({x}, {y})")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(int(l) for l in self.labels))
            if len(self.labels) != len(self.points):
                raise ConfigError("labels length must match points length")

    def __len__(self) -> int:
        return len(self.points)

    def bounds(self) -> tuple:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return ((min(xs), max(xs)), (min(ys), max(ys)))


@dataclass
class CoverageBuffer:
    """Per-pixel accumulated alpha (pre-quantization) and touching-point counts."""

    coverage: np.ndarray  # float64 (h, w)
    counts: np.ndarray  # int64 (h, w)


def _disc_offsets(radius: int):
    r = int(radius)
    ys, xs = np.mgrid[-r : r + 1, -r : r + 1]
    inside = xs * xs + ys * ys <= r * r
    return xs[inside], ys[inside]


def render_scatter(
    points: PointSet,
    opacity: float,
    radius: int = 3,
    canvas: CanvasConfig = CanvasConfig(),
    bounds=None,
    trace: DrawTrace | None = None,
):
    """Draw each point as a filled disc with "over" blending at ``opacity``.

    Returns (rgba image, CoverageBuffer). Discs are centered on the rounded
    pixel position of each point; opacity applies per point, so stacked
    points saturate as 1 - (1-o)^k.
    """
    if len(points) == 0:
        raise EmptyPointSet("cannot render an empty point set")
    if not 0.0 < opacity <= 1.0:
        raise ConfigError(f"opacity must be in (0, 1], got {opacity}")

    img = blank_image(canvas)
    draw_axes(img, canvas)
    rgb = img[..., :3].astype(np.float64) / 255.0

    h, w = canvas.height, canvas.width
    coverage = np.zeros((h, w), dtype=np.float64)
    counts = np.zeros((h, w), dtype=np.int64)

    if bounds is None:
        bounds = points.bounds()
    xs = [p[0] for p in points.points]
    ys = [p[1] for p in points.points]
    px, py = data_to_pixel(xs, ys, bounds, canvas)
    cx = np.rint(px).astype(np.int64)
    cy = np.rint(py).astype(np.int64)

    dx, dy = _disc_offsets(radius)
    labels = points.labels

    for i in range(len(points)):
        xs_i = cx[i] + dx
        ys_i = cy[i] + dy
        keep = (xs_i >= 0) & (xs_i < w) & (ys_i >= 0) & (ys_i < h)
        xs_i, ys_i = xs_i[keep], ys_i[keep]
        if labels is not None:
            color = np.asarray(PALETTE[labels[i] % len(PALETTE)], dtype=np.float64) / 255.0
        else:
            color = np.asarray(canvas.point_color, dtype=np.float64) / 255.0
        rgb[ys_i, xs_i] = opacity * color[None, :] + (1.0 - opacity) * rgb[ys_i, xs_i]
        coverage[ys_i, xs_i] = 1.0 - (1.0 - coverage[ys_i, xs_i]) * (1.0 - opacity)
        counts[ys_i, xs_i] += 1
        if trace is not None:
            trace.discs += 1

    img[..., :3] = np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)
    return img, CoverageBuffer(coverage=coverage, counts=counts)


@dataclass(frozen=True)
class OverplotMetrics:
    """Summary of a coverage buffer for the pairwise opacity oracle.

    saturated_fraction: covered pixels whose accumulated coverage reaches the
        saturation level (default 0.98).
    faintness: max accumulated coverage over pixels touched by exactly one
        point (how visible an isolated point still is).
    covered_fraction: fraction of all canvas pixels touched by any point.
    """

    saturated_fraction: float
    faintness: float
    covered_fraction: float

    def to_dict(self) -> dict:
        return {
            "saturated_fraction": self.saturated_fraction,
            "faintness": self.faintness,
            "covered_fraction": self.covered_fraction,
        }

    @classmethod
    def from_dict(cls, d) -> "OverplotMetrics":
        return cls(
            saturated_fraction=float(d["saturated_fraction"]),
            faintness=float(d["faintness"]),
            covered_fraction=float(d["covered_fraction"]),
        )


def overplot_metrics(buf: CoverageBuffer, saturation: float = 0.98) -> OverplotMetrics:
    covered = buf.counts >= 1
    n_cov = int(covered.sum())
    saturated = float((buf.coverage[covered] >= saturation).sum() / n_cov) if n_cov else 0.0
    single = buf.counts == 1
    faintness = float(buf.coverage[single].max()) if single.any() else 0.0
    return OverplotMetrics(
        saturated_fraction=saturated,
        faintness=faintness,
        covered_fraction=n_cov / buf.coverage.size,
    )
