"""Software direct volume renderer: front-to-back compositing with
per-structure contribution statistics for the deterministic perception oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .camera import Camera
from .colormap import apply_colormap
from .dataset import VolumeDataset
from .tf import TriangularTF, eval_tf


@dataclass(frozen=True)
class StructureStats:
    """How visible one masked structure is in a rendered image.

    silhouette_coverage: fraction of the structure's projected silhouette
        pixels (rays that sample at least one masked voxel) where the
        structure contributes any opacity.
    mean_share: mean accumulated compositing share over those contributing
        pixels.
    occluder_share: mean opacity accumulated in front of the structure's
        first sample, over all silhouette pixels.
    """

    silhouette_coverage: float
    mean_share: float
    occluder_share: float

    def to_dict(self) -> dict:
        return {
            "silhouette_coverage": self.silhouette_coverage,
            "mean_share": self.mean_share,
            "occluder_share": self.occluder_share,
        }

    @classmethod
    def from_dict(cls, d) -> "StructureStats":
        return cls(
            silhouette_coverage=float(d["silhouette_coverage"]),
            mean_share=float(d["mean_share"]),
            occluder_share=float(d["occluder_share"]),
        )


@dataclass(frozen=True)
class RenderOptions:
    # sampling step as a fraction of the smallest voxel spacing
    step_scale: float = 0.5
    early_termination: float = 0.99
    background: tuple = (0.0, 0.0, 0.0)


@dataclass
class RenderResult:
    image: np.ndarray  # uint8, (h, w, 4)
    alpha: np.ndarray  # float64, (h, w), pre-quantization accumulated opacity
    structures: Optional[dict] = field(default=None)  # id -> StructureStats
    shares: Optional[dict] = field(default=None)  # id -> float64 (h, w) share map


def _ray_box(origins, dirs, hi):
    """Slab intersection of rays with the box [0, hi]; returns (t_near, t_far)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / dirs
        t_lo = (0.0 - origins) * inv
        t_hi = (np.asarray(hi)[None, :] - origins) * inv
    t_near = np.nanmax(np.minimum(t_lo, t_hi), axis=1)
    t_far = np.nanmin(np.maximum(t_lo, t_hi), axis=1)
    return t_near, t_far


def render_volume(
    volume: VolumeDataset,
    tf: TriangularTF,
    camera: Camera,
    options: RenderOptions = RenderOptions(),
) -> RenderResult:
    """Front-to-back raycast of ``volume`` under a triangular opacity TF.

    Fixed sampling step of ``step_scale * min(spacing)`` starting half a step
    inside the box; the voxel containing each sample point supplies its value.
    A sample is composited only while the ray's accumulated opacity is below
    the early-termination threshold. When ground-truth masks are present the
    per-structure compositing shares are accumulated per pixel and reduced to
    StructureStats. Deterministic for fixed inputs.
    """
    w, h = camera.image_size
    origins, dirs = camera.rays()
    o = origins.reshape(-1, 3)
    d = dirs.reshape(-1, 3)
    n_rays = o.shape[0]

    extent = np.asarray(volume.extent, dtype=np.float64)
    spacing = np.asarray(volume.spacing, dtype=np.float64)
    dims = np.asarray(volume.dims, dtype=np.int64)
    dt = options.step_scale * float(spacing.min())

    t_near, t_far = _ray_box(o, d, extent)
    t_near = np.maximum(t_near, 0.0)
    span = t_far - t_near
    valid = span > 0.0

    acc_rgb = np.zeros((n_rays, 3), dtype=np.float64)
    acc_a = np.zeros(n_rays, dtype=np.float64)

    sids = volume.structure_ids()
    share = {sid: np.zeros(n_rays, dtype=np.float64) for sid in sids}
    hit = {sid: np.zeros(n_rays, dtype=bool) for sid in sids}
    front = {sid: np.zeros(n_rays, dtype=np.float64) for sid in sids}

    max_steps = int(np.ceil(span[valid].max() / dt)) if valid.any() else 0
    ray_ids = np.arange(n_rays)

    for step in range(max_steps):
        t = t_near + (step + 0.5) * dt
        active = valid & (t < t_far) & (acc_a < options.early_termination)
        if not active.any():
            break
        ids = ray_ids[active]
        pos = o[ids] + t[ids, None] * d[ids]
        idx = np.floor(pos / spacing[None, :]).astype(np.int64)
        np.clip(idx, 0, dims[None, :] - 1, out=idx)
        ix, iy, iz = idx[:, 0], idx[:, 1], idx[:, 2]

        values = volume.voxels[iz, iy, ix].astype(np.float64)
        alpha = eval_tf(tf, values)
        weight = (1.0 - acc_a[ids]) * alpha

        for sid in sids:
            in_s = volume.masks[sid][iz, iy, ix]
            if not in_s.any():
                continue
            s_ids = ids[in_s]
            first = ~hit[sid][s_ids]
            if first.any():
                f_ids = s_ids[first]
                front[sid][f_ids] = acc_a[f_ids]
                hit[sid][f_ids] = True
            share[sid][s_ids] += weight[in_s]

        rgb = apply_colormap(values, volume.value_range)
        acc_rgb[ids] += weight[:, None] * rgb
        acc_a[ids] += weight

    bg = np.asarray(options.background, dtype=np.float64)
    out_rgb = acc_rgb + (1.0 - acc_a)[:, None] * bg[None, :]
    image = np.empty((h, w, 4), dtype=np.uint8)
    image[..., :3] = np.clip(np.rint(out_rgb.reshape(h, w, 3) * 255.0), 0, 255).astype(np.uint8)
    image[..., 3] = 255

    structures = None
    share_maps = None
    if sids:
        structures = {}
        share_maps = {}
        for sid in sids:
            sil = hit[sid]
            contributing = sil & (share[sid] > 0.0)
            n_sil = int(sil.sum())
            n_con = int(contributing.sum())
            coverage = n_con / n_sil if n_sil else 0.0
            mean_share = float(share[sid][contributing].mean()) if n_con else 0.0
            occ = float(front[sid][sil].mean()) if n_sil else 0.0
            structures[sid] = StructureStats(
                silhouette_coverage=coverage, mean_share=mean_share, occluder_share=occ
            )
            share_maps[sid] = share[sid].reshape(h, w)

    return RenderResult(
        image=image,
        alpha=acc_a.reshape(h, w),
        structures=structures,
        shares=share_maps,
    )
