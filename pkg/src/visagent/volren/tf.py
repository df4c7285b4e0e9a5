"""Triangle-shaped opacity transfer functions over a scalar window."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


@dataclass(frozen=True)
class TriangularTF:
    """Opacity ramps linearly from 0 at ``start`` up to ``peak_opacity`` at the
    window midpoint and back down to 0 at ``end``; zero outside the window."""

    start: float
    end: float
    peak_opacity: float = 1.0

    def __post_init__(self):
        if not self.start < self.end:
            raise ConfigError(f"transfer function needs start < end, got [{self.start}, {self.end}]")
        if not 0.0 < self.peak_opacity <= 1.0:
            raise ConfigError(f"peak_opacity must be in (0, 1], got {self.peak_opacity}")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.start + self.end)

    @property
    def width(self) -> float:
        return self.end - self.start

    def with_peak(self, peak_opacity: float) -> "TriangularTF":
        return TriangularTF(self.start, self.end, peak_opacity)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "peak_opacity": self.peak_opacity}


def eval_tf(tf: TriangularTF, value):
    """Opacity of ``value`` under ``tf``; accepts scalars or numpy arrays."""
    v = np.asarray(value, dtype=np.float64)
    half = 0.5 * tf.width
    # distance to the midpoint, folded so both slopes share one expression
    rise = 1.0 - np.abs(v - tf.midpoint) / half
    out = tf.peak_opacity * np.clip(rise, 0.0, 1.0)
    if np.isscalar(value) or getattr(value, "ndim", 1) == 0:
        return float(out)
    return out
