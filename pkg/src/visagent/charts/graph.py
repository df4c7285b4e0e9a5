"""Seeded force-directed layout and node-link rendering."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, MissingPosition
from .canvas import CanvasConfig, DrawTrace, default_font, pil_canvas

NODE_FILL = (31, 119, 180, 255)
NODE_RADIUS = 10
EDGE_COLOR = (120, 120, 120, 255)
LABEL_COLOR = (0, 0, 0, 255)


def fr_layout(adjacency: dict, iterations: int = 200, seed: int = 0) -> dict:
    """Force-directed layout: all-pairs repulsion, per-edge attraction, linear
    cooling; positions start from a seeded uniform draw and are min-max
    normalized into the unit square at the end."""
    nodes = list(adjacency.keys())
    if not nodes:
        raise ConfigError("graph needs at least one node")
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    edges = []
    for v, nbrs in adjacency.items():
        for u in nbrs:
            if u not in index:
                raise ConfigError(f"edge endpoint {u!r} is not a node")
            if index[v] < index[u]:
                edges.append((index[v], index[u]))

    rng = np.random.default_rng(seed)
    pos = rng.uniform(0.0, 1.0, size=(n, 2))
    if n == 1:
        return {nodes[0]: (0.5, 0.5)}

    k = np.sqrt(1.0 / n)
    t = 0.1
    dt = t / (iterations + 1)

    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=2)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        # repulsion k^2 / d
        disp = (delta / dist[..., None]) * (k * k / dist)[..., None]
        np.einsum("iij->ij", disp)[:] = 0.0
        force = disp.sum(axis=1)
        # attraction d^2 / k along each edge
        for a, b in edges:
            diff = pos[a] - pos[b]
            d = max(float(np.linalg.norm(diff)), 1e-9)
            pull = diff / d * (d * d / k)
            force[a] -= pull
            force[b] += pull
        mag = np.linalg.norm(force, axis=1)
        mag = np.maximum(mag, 1e-9)
        step = np.minimum(mag, t)
        pos += force / mag[:, None] * step[:, None]
        t -= dt

    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = np.where(hi - lo > 0.0, hi - lo, 1.0)
    centered = np.where((hi - lo)[None, :] > 0.0, (pos - lo[None, :]) / span[None, :], 0.5)
    return {v: (float(centered[i, 0]), float(centered[i, 1])) for v, i in index.items()}


def render_node_link(
    adjacency: dict,
    positions: dict,
    labels: dict | None = None,
    canvas: CanvasConfig = CanvasConfig(),
    trace: DrawTrace | None = None,
) -> np.ndarray:
    """Edges as line segments, nodes as labeled discs.

    Nodes sharing an identical position get deterministic label offsets so
    both labels stay legible.
    """
    for v in adjacency:
        if v not in positions:
            raise MissingPosition(f"no position for node {v!r}")
    labels = labels or {v: str(v) for v in adjacency}

    img, draw = pil_canvas(canvas)
    font = default_font()
    x0, y0, x1, y1 = canvas.plot_box

    def to_px(p):
        return (x0 + p[0] * (x1 - x0), y1 - p[1] * (y1 - y0))

    drawn = set()
    for v, nbrs in adjacency.items():
        for u in nbrs:
            key = (v, u) if str(v) <= str(u) else (u, v)
            if key in drawn:
                continue
            drawn.add(key)
            draw.line([to_px(positions[v]), to_px(positions[u])], fill=EDGE_COLOR, width=1)
            if trace is not None:
                trace.segments += 1

    seen_px = {}
    for v in adjacency:
        px, py = to_px(positions[v])
        draw.ellipse(
            [px - NODE_RADIUS, py - NODE_RADIUS, px + NODE_RADIUS, py + NODE_RADIUS],
            fill=NODE_FILL,
            outline=(0, 0, 0, 255),
        )
        if trace is not None:
            trace.discs += 1
        key = (round(px), round(py))
        bump = seen_px.get(key, 0)
        seen_px[key] = bump + 1
        draw.text(
            (px + NODE_RADIUS + 2, py - NODE_RADIUS + bump * 12),
            str(labels.get(v, v)),
            fill=LABEL_COLOR,
            font=font,
        )
        if trace is not None:
            trace.labels += 1

    return np.asarray(img, dtype=np.uint8)
