"""Built-in perceptually ordered colormap (viridis control points, CC0)."""

from __future__ import annotations

import numpy as np

# 11 evenly spaced viridis samples, RGB in [0, 1]
_VIRIDIS = np.array(
    [
        [0.267004, 0.004874, 0.329415],
        [0.282623, 0.140926, 0.457517],
        [0.253935, 0.265254, 0.529983],
        [0.206756, 0.371758, 0.553117],
        [0.163625, 0.471133, 0.558148],
        [0.127568, 0.566949, 0.550556],
        [0.134692, 0.658636, 0.517649],
        [0.266941, 0.748751, 0.440573],
        [0.477504, 0.821444, 0.318195],
        [0.741388, 0.873449, 0.149561],
        [0.993248, 0.906157, 0.143936],
    ],
    dtype=np.float64,
)


def apply_colormap(values, value_range):
    """Map scalars to RGB via piecewise-linear interpolation of the built-in map."""
    lo, hi = value_range
    span = hi - lo if hi > lo else 1.0
    t = np.clip((np.asarray(values, dtype=np.float64) - lo) / span, 0.0, 1.0)
    n = len(_VIRIDIS) - 1
    idx = np.minimum((t * n).astype(np.int64), n - 1)
    frac = t * n - idx
    lo_c = _VIRIDIS[idx]
    hi_c = _VIRIDIS[idx + 1]
    return lo_c + frac[..., None] * (hi_c - lo_c)
