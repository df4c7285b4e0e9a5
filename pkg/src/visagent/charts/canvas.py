"""Shared 2-D canvas conventions for the chart renderers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from PIL import Image, ImageDraw, ImageFont

AXIS_GRAY = (90, 90, 90, 255)

# categorical palette for labeled points / cluster ids
PALETTE = (
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
    (188, 189, 34),
    (23, 190, 207),
)


@dataclass(frozen=True)
class CanvasConfig:
    width: int = 640
    height: int = 480
    margin: int = 40
    background: tuple = (255, 255, 255)
    point_color: tuple = (31, 119, 180)
    draw_axes: bool = True

    @property
    def plot_box(self) -> tuple:
        """(x0, y0, x1, y1) pixel bounds of the data area."""
        return (self.margin, self.margin, self.width - self.margin, self.height - self.margin)


@dataclass
class DrawTrace:
    """Optional instrumentation: counts of primitive draw calls."""

    discs: int = 0
    polylines: int = 0
    segments: int = 0
    labels: int = 0
    notes: list = field(default_factory=list)


def blank_image(canvas: CanvasConfig) -> np.ndarray:
    img = np.empty((canvas.height, canvas.width, 4), dtype=np.uint8)
    img[..., 0] = canvas.background[0]
    img[..., 1] = canvas.background[1]
    img[..., 2] = canvas.background[2]
    img[..., 3] = 255
    return img


def draw_axes(img: np.ndarray, canvas: CanvasConfig) -> None:
    """Left and bottom axis lines along the plot box."""
    if not canvas.draw_axes:
        return
    x0, y0, x1, y1 = canvas.plot_box
    img[y1, x0 : x1 + 1, :3] = AXIS_GRAY[:3]
    img[y0 : y1 + 1, x0, :3] = AXIS_GRAY[:3]


def data_to_pixel(xs, ys, bounds, canvas: CanvasConfig):
    """Map data coordinates into the plot box; y grows upward in data space."""
    (xmin, xmax), (ymin, ymax) = bounds
    x0, y0, x1, y1 = canvas.plot_box
    xspan = xmax - xmin if xmax > xmin else 1.0
    yspan = ymax - ymin if ymax > ymin else 1.0
    px = x0 + (np.asarray(xs, dtype=np.float64) - xmin) / xspan * (x1 - x0)
    py = y1 - (np.asarray(ys, dtype=np.float64) - ymin) / yspan * (y1 - y0)
    return px, py


def pil_canvas(canvas: CanvasConfig):
    """PIL image + draw handle for the line/text-based renderers."""
    img = Image.new("RGBA", (canvas.width, canvas.height), tuple(canvas.background) + (255,))
    return img, ImageDraw.Draw(img)


def default_font():
    return ImageFont.load_default()
