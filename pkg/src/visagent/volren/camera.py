"""Pinhole camera and per-pixel ray generation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


@dataclass(frozen=True)
class Camera:
    eye: tuple
    look_at: tuple
    up: tuple = (0.0, 1.0, 0.0)
    vfov_deg: float = 45.0
    image_size: tuple = (256, 256)

    def __post_init__(self):
        eye = np.asarray(self.eye, dtype=np.float64)
        at = np.asarray(self.look_at, dtype=np.float64)
        up = np.asarray(self.up, dtype=np.float64)
        fwd = at - eye
        if np.linalg.norm(fwd) == 0.0:
            raise ConfigError("camera eye and look_at coincide")
        fwd = fwd / np.linalg.norm(fwd)
        if np.linalg.norm(np.cross(fwd, up)) < 1e-12:
            raise ConfigError("camera up vector is parallel to the view direction")
        w, h = self.image_size
        if w < 1 or h < 1:
            raise ConfigError(f"image size must be positive, got {self.image_size}")

    def rays(self):
        """Origins and unit directions for every pixel, row-major (h, w, 3).

        Pixel (0, 0) is the top-left corner; rays pass through pixel centers.
        """
        eye = np.asarray(self.eye, dtype=np.float64)
        at = np.asarray(self.look_at, dtype=np.float64)
        up = np.asarray(self.up, dtype=np.float64)
        w, h = self.image_size

        fwd = at - eye
        fwd = fwd / np.linalg.norm(fwd)
        right = np.cross(fwd, up)
        right = right / np.linalg.norm(right)
        true_up = np.cross(right, fwd)

        half_h = math.tan(math.radians(self.vfov_deg) / 2.0)
        half_w = half_h * (w / h)

        # normalized device coords of pixel centers
        xs = (2.0 * (np.arange(w) + 0.5) / w - 1.0) * half_w
        ys = (1.0 - 2.0 * (np.arange(h) + 0.5) / h) * half_h
        dirs = (
            fwd[None, None, :]
            + xs[None, :, None] * right[None, None, :]
            + ys[:, None, None] * true_up[None, None, :]
        )
        dirs = dirs / np.linalg.norm(dirs, axis=2, keepdims=True)
        origins = np.broadcast_to(eye, dirs.shape)
        return origins, dirs

    def to_dict(self) -> dict:
        return {
            "eye": list(self.eye),
            "look_at": list(self.look_at),
            "up": list(self.up),
            "vfov_deg": self.vfov_deg,
            "image_size": list(self.image_size),
        }


def default_camera(volume_extent, image_size=(256, 256)) -> Camera:
    """Fixed oblique view of the whole volume box, framing its diagonal."""
    ex, ey, ez = volume_extent
    center = (ex / 2.0, ey / 2.0, ez / 2.0)
    radius = 0.5 * math.sqrt(ex * ex + ey * ey + ez * ez)
    # pull back far enough that the bounding sphere fits a 45 degree fov
    dist = radius / math.tan(math.radians(45.0) / 2.0) + radius
    eye = (center[0] + 0.55 * dist, center[1] + 0.35 * dist, center[2] + 0.75 * dist)
    return Camera(eye=eye, look_at=center, up=(0.0, 1.0, 0.0), vfov_deg=45.0, image_size=tuple(image_size))
