"""PNG encoding helpers; all images are 8-bit RGBA."""

from __future__ import annotations

import hashlib
import io

import numpy as np
from PIL import Image


def to_png(array: np.ndarray) -> bytes:
    """Encode an (h, w, 4) uint8 array as PNG bytes (deterministic)."""
    if array.dtype != np.uint8 or array.ndim != 3 or array.shape[2] != 4:
        raise ValueError(f"expected (h, w, 4) uint8 array, got {array.dtype} {array.shape}")
    buf = io.BytesIO()
    Image.fromarray(array, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def from_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as img:
        return np.asarray(img.convert("RGBA"), dtype=np.uint8)


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
