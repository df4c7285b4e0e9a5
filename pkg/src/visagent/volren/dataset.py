"""Volume datasets: headerless RAW loading, sidecar metadata, histograms."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
import numpy as np

from ..errors import ConfigError, SizeMismatch

_DTYPES = {"u8": np.uint8, "u16": np.uint16}
_BYTES = {"u8": 1, "u16": 2}


@dataclass
class VolumeDataset:
    """Dense scalar volume with optional per-structure ground-truth masks.

    ``voxels`` is indexed [z, y, x] with dims = (nx, ny, nz); ``spacing`` is
    the physical size of one voxel along (x, y, z).
    """

    dims: tuple
    voxel_type: str
    spacing: tuple
    voxels: np.ndarray
    value_range: tuple
    masks: dict = field(default_factory=dict)

    def __post_init__(self):
        nx, ny, nz = self.dims
        if nx <= 0 or ny <= 0 or nz <= 0:
            raise ConfigError(f"dims must be positive, got {self.dims}")
        if self.voxel_type not in _DTYPES:
            raise ConfigError(f"unsupported voxel type {self.voxel_type!r}")
        if any(s <= 0 for s in self.spacing):
            raise ConfigError(f"spacing must be positive, got {self.spacing}")
        if self.voxels.shape != (nz, ny, nx):
            raise SizeMismatch(f"voxel array shape {self.voxels.shape} != dims (z,y,x) {(nz, ny, nx)}")
        lo, hi = self.value_range
        vmin, vmax = float(self.voxels.min()), float(self.voxels.max())
        if vmin < lo or vmax > hi:
            raise ConfigError(f"voxels [{vmin}, {vmax}] outside declared value range [{lo}, {hi}]")
        for sid, mask in self.masks.items():
            if mask.shape != self.voxels.shape:
                raise SizeMismatch(f"mask {sid!r} shape {mask.shape} != volume shape {self.voxels.shape}")

    @property
    def extent(self) -> tuple:
        """Physical size of the volume box along (x, y, z)."""
        nx, ny, nz = self.dims
        sx, sy, sz = self.spacing
        return (nx * sx, ny * sy, nz * sz)

    def structure_ids(self) -> list:
        return sorted(self.masks)


def load_raw(path, dims, voxel_type: str, spacing=(1.0, 1.0, 1.0)) -> VolumeDataset:
    """Load a headerless little-endian RAW volume.

    The file must hold exactly prod(dims) voxels; the value range is computed
    from the data.
    """
    if voxel_type not in _DTYPES:
        raise ConfigError(f"unsupported voxel type {voxel_type!r}")
    nx, ny, nz = dims
    expected = nx * ny * nz * _BYTES[voxel_type]
    actual = os.path.getsize(path)
    if actual != expected:
        raise SizeMismatch(f"{path}: expected {expected} bytes for dims {tuple(dims)} {voxel_type}, found {actual}")
    raw = np.fromfile(path, dtype=np.dtype(_DTYPES[voxel_type]).newbyteorder("<"))
    voxels = raw.astype(_DTYPES[voxel_type]).reshape(nz, ny, nx)
    value_range = (float(voxels.min()), float(voxels.max()))
    return VolumeDataset(
        dims=tuple(int(d) for d in dims),
        voxel_type=voxel_type,
        spacing=tuple(float(s) for s in spacing),
        voxels=voxels,
        value_range=value_range,
    )


def load_with_sidecar(raw_path) -> VolumeDataset:
    """Load a RAW volume described by a JSON sidecar (same path + '.json').

    The sidecar may name companion mask files (uint8 RAW, nonzero = inside)
    keyed by structure id; these become the ground-truth masks the
    recognizability oracle uses.
    """
    sidecar = str(raw_path) + ".json"
    with open(sidecar, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    volume = load_raw(
        raw_path,
        dims=tuple(meta["dims"]),
        voxel_type=meta["voxel_type"],
        spacing=tuple(meta.get("spacing", (1.0, 1.0, 1.0))),
    )
    base = os.path.dirname(os.path.abspath(raw_path))
    nz, ny, nx = volume.voxels.shape
    for sid, rel in meta.get("masks", {}).items():
        mask_path = os.path.join(base, rel)
        raw = np.fromfile(mask_path, dtype=np.uint8)
        if raw.size != volume.voxels.size:
            raise SizeMismatch(f"mask {sid!r}: {raw.size} voxels, volume has {volume.voxels.size}")
        volume.masks[sid] = raw.reshape(nz, ny, nx) != 0
    return volume


def save_raw(volume: VolumeDataset, path) -> None:
    """Write voxels little-endian plus the JSON sidecar (and any masks)."""
    volume.voxels.astype(np.dtype(_DTYPES[volume.voxel_type]).newbyteorder("<")).tofile(path)
    meta = {"dims": list(volume.dims), "voxel_type": volume.voxel_type, "spacing": list(volume.spacing)}
    if volume.masks:
        meta["masks"] = {}
        stem = os.path.basename(str(path))
        for sid, mask in volume.masks.items():
            rel = f"{stem}.{sid}.mask"
            mask.astype(np.uint8).tofile(os.path.join(os.path.dirname(os.path.abspath(str(path))), rel))
            meta["masks"][sid] = rel
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple
    counts: tuple

    def to_dict(self) -> dict:
        return {"bin_edges": list(self.bin_edges), "counts": list(self.counts)}


def compute_histogram(volume: VolumeDataset, bins: int) -> Histogram:
    """Equal-width histogram over the declared value range; counts sum to the voxel count."""
    if bins < 1:
        raise ConfigError(f"bins must be >= 1, got {bins}")
    lo, hi = volume.value_range
    if hi <= lo:
        hi = lo + 1.0
    counts, edges = np.histogram(volume.voxels, bins=bins, range=(lo, hi))
    return Histogram(bin_edges=tuple(float(e) for e in edges), counts=tuple(int(c) for c in counts))


def describe_histogram(hist: Histogram) -> str:
    """Compact text rendering used in agent prompts."""
    parts = []
    for i, c in enumerate(hist.counts):
        parts.append(f"[{hist.bin_edges[i]:g}, {hist.bin_edges[i + 1]:g}): {c}")
    return "; ".join(parts)
