"""Embedding scatter rendering, matching the agent-side canvas conventions
(640x480 canvas, 40 px margin, left/bottom axes, radius-3 discs)."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

WIDTH, HEIGHT, MARGIN = 640, 480, 40
RADIUS = 3
BACKGROUND = (255, 255, 255)
POINT_COLOR = (31, 119, 180)
AXIS_GRAY = (90, 90, 90)


def _disc_offsets(radius: int):
    ys, xs = np.mgrid[-radius : radius + 1, -radius : radius + 1]
    inside = xs * xs + ys * ys <= radius * radius
    return xs[inside], ys[inside]


def render_embedding(points: np.ndarray, opacity: float = 0.9) -> bytes:
    """Draw the 2-D embedding as alpha-blended discs; returns PNG bytes."""
    img = np.empty((HEIGHT, WIDTH, 4), dtype=np.uint8)
    img[..., :3] = BACKGROUND
    img[..., 3] = 255
    x0, y0, x1, y1 = MARGIN, MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN
    img[y1, x0 : x1 + 1, :3] = AXIS_GRAY
    img[y0 : y1 + 1, x0, :3] = AXIS_GRAY

    pts = np.asarray(points, dtype=np.float64)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    px = x0 + (pts[:, 0] - lo[0]) / span[0] * (x1 - x0)
    py = y1 - (pts[:, 1] - lo[1]) / span[1] * (y1 - y0)
    cx = np.rint(px).astype(np.int64)
    cy = np.rint(py).astype(np.int64)

    rgb = img[..., :3].astype(np.float64) / 255.0
    color = np.asarray(POINT_COLOR, dtype=np.float64) / 255.0
    dx, dy = _disc_offsets(RADIUS)
    for i in range(len(pts)):
        xs = cx[i] + dx
        ys = cy[i] + dy
        keep = (xs >= 0) & (xs < WIDTH) & (ys >= 0) & (ys < HEIGHT)
        xs, ys = xs[keep], ys[keep]
        rgb[ys, xs] = opacity * color[None, :] + (1.0 - opacity) * rgb[ys, xs]

    img[..., :3] = np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()
