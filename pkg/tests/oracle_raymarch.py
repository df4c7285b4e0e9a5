"""Single-threaded scalar ray-march oracle for checking the volume renderer.

Implements the same rendering definition (pinhole rays through pixel centers,
slab box intersection, fixed-step sampling at segment midpoints, containing-
cell value lookup, front-to-back compositing with early termination, and the
per-structure share/first-hit accounting) in plain Python loops, independent
of the vectorized implementation under test.
"""

from __future__ import annotations

import math


def _norm(v):
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    return (v[0] / n, v[1] / n, v[2] / n)


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _pixel_ray(camera, px, py):
    eye = tuple(float(c) for c in camera.eye)
    at = tuple(float(c) for c in camera.look_at)
    up = tuple(float(c) for c in camera.up)
    w, h = camera.image_size

    fwd = _norm((at[0] - eye[0], at[1] - eye[1], at[2] - eye[2]))
    right = _norm(_cross(fwd, up))
    true_up = _cross(right, fwd)

    half_h = math.tan(math.radians(camera.vfov_deg) / 2.0)
    half_w = half_h * (w / h)
    x = (2.0 * (px + 0.5) / w - 1.0) * half_w
    y = (1.0 - 2.0 * (py + 0.5) / h) * half_h
    direction = _norm(
        (
            fwd[0] + x * right[0] + y * true_up[0],
            fwd[1] + x * right[1] + y * true_up[1],
            fwd[2] + x * right[2] + y * true_up[2],
        )
    )
    return eye, direction


def _slab(origin, direction, extent):
    t_near, t_far = -math.inf, math.inf
    for axis in range(3):
        o, d, hi = origin[axis], direction[axis], extent[axis]
        if d == 0.0:
            if o < 0.0 or o > hi:
                return None
            continue
        t0, t1 = (0.0 - o) / d, (hi - o) / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_near = max(t_near, t0)
        t_far = min(t_far, t1)
    if t_far <= max(t_near, 0.0):
        return None
    return max(t_near, 0.0), t_far


def _tf_opacity(tf, value):
    mid = 0.5 * (tf.start + tf.end)
    half = 0.5 * (tf.end - tf.start)
    rise = 1.0 - abs(value - mid) / half
    return tf.peak_opacity * min(max(rise, 0.0), 1.0)


def brute_force_stats(volume, tf, camera, step_scale=0.5, early_termination=0.99):
    """Returns (alpha rows, {sid: (coverage, mean_share, occluder_share)})."""
    w, h = camera.image_size
    nx, ny, nz = volume.dims
    sx, sy, sz = volume.spacing
    extent = (nx * sx, ny * sy, nz * sz)
    dt = step_scale * min(volume.spacing)
    sids = sorted(volume.masks)

    alpha_rows = [[0.0] * w for _ in range(h)]
    share = {sid: [[0.0] * w for _ in range(h)] for sid in sids}
    hit = {sid: [[False] * w for _ in range(h)] for sid in sids}
    front = {sid: [[0.0] * w for _ in range(h)] for sid in sids}

    for py in range(h):
        for px in range(w):
            origin, direction = _pixel_ray(camera, px, py)
            seg = _slab(origin, direction, extent)
            if seg is None:
                continue
            t_near, t_far = seg
            acc = 0.0
            step = 0
            while True:
                t = t_near + (step + 0.5) * dt
                if t >= t_far or acc >= early_termination:
                    break
                pos = (
                    origin[0] + t * direction[0],
                    origin[1] + t * direction[1],
                    origin[2] + t * direction[2],
                )
                ix = min(max(int(math.floor(pos[0] / sx)), 0), nx - 1)
                iy = min(max(int(math.floor(pos[1] / sy)), 0), ny - 1)
                iz = min(max(int(math.floor(pos[2] / sz)), 0), nz - 1)
                value = float(volume.voxels[iz, iy, ix])
                a = _tf_opacity(tf, value)
                weight = (1.0 - acc) * a
                for sid in sids:
                    if volume.masks[sid][iz, iy, ix]:
                        if not hit[sid][py][px]:
                            hit[sid][py][px] = True
                            front[sid][py][px] = acc
                        share[sid][py][px] += weight
                acc += weight
                step += 1
            alpha_rows[py][px] = acc

    stats = {}
    for sid in sids:
        sil = [(py, px) for py in range(h) for px in range(w) if hit[sid][py][px]]
        contributing = [(py, px) for py, px in sil if share[sid][py][px] > 0.0]
        coverage = len(contributing) / len(sil) if sil else 0.0
        mean_share = (
            sum(share[sid][py][px] for py, px in contributing) / len(contributing) if contributing else 0.0
        )
        occ = sum(front[sid][py][px] for py, px in sil) / len(sil) if sil else 0.0
        stats[sid] = (coverage, mean_share, occ)
    return alpha_rows, stats
