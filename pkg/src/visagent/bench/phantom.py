"""Synthetic volume phantoms with ground-truth structure masks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, OverlappingBands
from ..volren.dataset import VolumeDataset


@dataclass(frozen=True)
class PhantomStructure:
    id: str
    shape: str  # "sphere" | "box" | "shell"
    band: tuple  # (low, high) scalar values this structure fills
    center: tuple = (0.5, 0.5, 0.5)  # fractions of the volume extent
    size: float = 0.3  # radius (sphere/shell) or half-edge (box), fraction
    thickness: float = 0.08  # shell wall, fraction

    def __post_init__(self):
        if self.shape not in ("sphere", "box", "shell"):
            raise ConfigError(f"unknown phantom shape {self.shape!r}")
        if not self.band[0] < self.band[1]:
            raise ConfigError(f"structure {self.id!r}: band must be increasing, got {self.band}")


@dataclass(frozen=True)
class PhantomSpec:
    dims: tuple = (32, 32, 32)
    voxel_type: str = "u8"
    spacing: tuple = (1.0, 1.0, 1.0)
    value_range: tuple = (0.0, 255.0)
    structures: tuple = field(default_factory=tuple)
    seed: int = 0


def _bands_overlap(a, b) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def gen_volume_phantom(spec: PhantomSpec) -> VolumeDataset:
    """Voxelize the structures onto a zero background.

    Each structure fills its scalar band with seeded uniform integer values
    (never 0, which is reserved for background) and records a boolean mask.
    Later structures overwrite earlier ones where shapes overlap; bands must
    be pairwise disjoint so a transfer-function window isolates one structure.
    """
    structures = tuple(spec.structures)
    for i in range(len(structures)):
        for j in range(i + 1, len(structures)):
            if _bands_overlap(structures[i].band, structures[j].band):
                raise OverlappingBands(
                    f"structures {structures[i].id!r} and {structures[j].id!r} have overlapping bands"
                )

    nx, ny, nz = spec.dims
    voxels = np.zeros((nz, ny, nx), dtype=np.float64)
    rng = np.random.default_rng(spec.seed)

    zs, ys, xs = np.mgrid[0:nz, 0:ny, 0:nx]
    # voxel centers as fractions of the extent
    fx = (xs + 0.5) / nx
    fy = (ys + 0.5) / ny
    fz = (zs + 0.5) / nz

    masks = {}
    for s in structures:
        cx, cy, cz = s.center
        if s.shape == "sphere":
            inside = (fx - cx) ** 2 + (fy - cy) ** 2 + (fz - cz) ** 2 <= s.size**2
        elif s.shape == "shell":
            r2 = (fx - cx) ** 2 + (fy - cy) ** 2 + (fz - cz) ** 2
            inside = (r2 <= s.size**2) & (r2 >= (s.size - s.thickness) ** 2)
        else:  # box
            inside = (
                (np.abs(fx - cx) <= s.size) & (np.abs(fy - cy) <= s.size) & (np.abs(fz - cz) <= s.size)
            )
        if not inside.any():
            raise ConfigError(f"structure {s.id!r} covers no voxels at dims {spec.dims}")
        lo = max(int(np.ceil(s.band[0])), 1)
        hi = int(np.floor(s.band[1]))
        if hi < lo:
            raise ConfigError(f"structure {s.id!r}: band {s.band} holds no integer values")
        voxels[inside] = rng.integers(lo, hi + 1, size=int(inside.sum()))
        masks[s.id] = inside

    # a voxel belongs to the structure written last at its position
    claimed = np.zeros_like(voxels, dtype=bool)
    final_masks = {}
    for s in reversed(structures):
        mask = masks[s.id] & ~claimed
        final_masks[s.id] = mask
        claimed |= mask

    dtype = np.uint8 if spec.voxel_type == "u8" else np.uint16
    return VolumeDataset(
        dims=spec.dims,
        voxel_type=spec.voxel_type,
        spacing=spec.spacing,
        voxels=voxels.astype(dtype),
        value_range=spec.value_range,
        masks=final_masks,
    )


def band_phantom(band: tuple, dims=(32, 32, 32), seed: int = 0, structure_id: str = "target") -> VolumeDataset:
    """Single centered sphere filling ``band``; the workhorse test phantom."""
    return gen_volume_phantom(
        PhantomSpec(
            dims=dims,
            seed=seed,
            structures=(PhantomStructure(id=structure_id, shape="sphere", band=band, size=0.32),),
        )
    )


def nested_phantom(outer_band=(60.0, 85.0), inner_band=(100.0, 125.0), dims=(32, 32, 32), seed: int = 0) -> VolumeDataset:
    """Shell around a smaller sphere, scalar bands disjoint."""
    return gen_volume_phantom(
        PhantomSpec(
            dims=dims,
            seed=seed,
            structures=(
                PhantomStructure(id="outer", shape="shell", band=outer_band, size=0.42, thickness=0.1),
                PhantomStructure(id="inner", shape="sphere", band=inner_band, size=0.2),
            ),
        )
    )
