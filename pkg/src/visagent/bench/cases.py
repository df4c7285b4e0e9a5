"""Seeded benchmark case generators with exact ground truth.

Each case is fully reproducible from (task, seed, params): the generators
draw everything from a seeded RNG, render through the deterministic chart
and volume renderers, and record the ground truth at generation time.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from ..charts.canvas import CanvasConfig
from ..charts.graph import fr_layout, render_node_link
from ..charts.parallel import render_parallel_coords
from ..charts.scatter import PointSet, render_scatter
from ..errors import BadParams
from ..imaging import to_png
from ..perception.assessment import NOT_RECOGNIZABLE
from ..perception.oracle import oracle_assess_volume
from ..volren.camera import default_camera
from ..volren.render import render_volume
from ..volren.tf import TriangularTF
from .phantom import band_phantom

TASK_SCATTER_CLUSTER = "scatter_cluster"
TASK_SCATTER_CLUSTER_COUNT = "scatter_cluster_count"
TASK_SCATTER_OUTLIER = "scatter_outlier"
TASK_SCATTER_OUTLIER_COUNT = "scatter_outlier_count"
TASK_SCATTER_CORRELATION = "scatter_correlation"
TASK_PC_CLUSTER_COUNT = "pc_cluster_count"
TASK_PC_OUTLIER_COUNT = "pc_outlier_count"
TASK_PC_CORRELATION = "pc_correlation"
TASK_GRAPH_NODE_COUNT = "graph_node_count"
TASK_GRAPH_FIND_NODE = "graph_find_node"
TASK_GRAPH_CONNECTION = "graph_connection"
TASK_GRAPH_NEIGHBOR = "graph_neighbor"
TASK_VOLUME_RECOGNIZABLE = "volume_recognizable"

ALL_TASKS = (
    TASK_SCATTER_CLUSTER,
    TASK_SCATTER_CLUSTER_COUNT,
    TASK_SCATTER_OUTLIER,
    TASK_SCATTER_OUTLIER_COUNT,
    TASK_SCATTER_CORRELATION,
    TASK_PC_CLUSTER_COUNT,
    TASK_PC_OUTLIER_COUNT,
    TASK_PC_CORRELATION,
    TASK_GRAPH_NODE_COUNT,
    TASK_GRAPH_FIND_NODE,
    TASK_GRAPH_CONNECTION,
    TASK_GRAPH_NEIGHBOR,
    TASK_VOLUME_RECOGNIZABLE,
)

PROMPTS = {
    TASK_SCATTER_CLUSTER: (
        "You are a scatter plot visualization expert. Is there any cluster in this visualization?"
    ),
    TASK_SCATTER_CLUSTER_COUNT: (
        "You are a scatter plot visualization expert. Is there any cluster in this visualization? "
        "Can you tell me how many clusters are in this visualization?"
    ),
    TASK_SCATTER_OUTLIER: (
        "You are a scatter plot visualization expert. Is there any outlier in this visualization?"
    ),
    TASK_SCATTER_OUTLIER_COUNT: (
        "You are a scatter plot visualization expert. Is there any outlier in this visualization? "
        "Can you tell me how many outliers are in this visualization?"
    ),
    TASK_SCATTER_CORRELATION: (
        "You are a scatter plot visualization expert. The image shows two scatter plots side by side, "
        "left first and right second. Which image has a high correlation?"
    ),
    TASK_PC_CLUSTER_COUNT: (
        "You are a parallel coordinate visualization expert. Is there any cluster in this visualization? "
        "Can you tell me how many clusters are in this visualization?"
    ),
    TASK_PC_OUTLIER_COUNT: (
        "You are a parallel coordinate visualization expert. Is there any outlier in this visualization? "
        "Can you tell me how many outliers are in this visualization?"
    ),
    TASK_PC_CORRELATION: (
        "You are a parallel coordinate visualization expert. Is there any correlation between these variables?"
    ),
    TASK_GRAPH_NODE_COUNT: "You are a graph visualization expert. How many nodes are in this visualization?",
    TASK_GRAPH_FIND_NODE: "You are a graph visualization expert. Is there a node named {node} in this visualization?",
    TASK_GRAPH_CONNECTION: "You are a graph visualization expert. Is there a path from node {a} to node {b}?",
    TASK_GRAPH_NEIGHBOR: "You are a graph visualization expert. What is the neighbor node of node {node}?",
    TASK_VOLUME_RECOGNIZABLE: (
        "You are provided with a screenshot showing a volume rendering. Assess whether you can recognize "
        "the structure of interest. Use only one of these options for assessment: 'Not recognizable', "
        "and 'Recognizable'."
    ),
}

N_POINTS = 500
PC_DIMS = 5
GRAPH_NODES = 10
GRAPH_EDGE_P = 0.2
BLOB_SIGMA = 0.03
# §4-style sweep of peak opacities used by the volume task
VOLUME_PEAKS = (0.9, 0.4, 0.2, 0.05)


@dataclass(frozen=True)
class BenchCase:
    task: str
    seed: int
    image_png: bytes
    ground_truth: object
    prompt: str
    detail: dict = field(default_factory=dict)


def _cluster_centers(rng, k: int, min_dist: float):
    """Rejection-sample k centers pairwise at least min_dist apart."""
    centers = []
    attempts = 0
    while len(centers) < k:
        c = rng.uniform(0.12, 0.88, size=2)
        if all(np.hypot(*(c - o)) >= min_dist for o in centers):
            centers.append(c)
        attempts += 1
        if attempts > 10_000:
            raise BadParams(f"cannot place {k} separated cluster centers")
    return centers


def _blob_points(rng, k: int, n_total: int, sigma: float):
    centers = _cluster_centers(rng, k, min_dist=max(4.0 * sigma, 0.18))
    counts = [n_total // k + (1 if i < n_total % k else 0) for i in range(k)]
    pts = []
    labels = []
    for i, (c, n) in enumerate(zip(centers, counts)):
        blob = rng.normal(c, sigma, size=(n, 2))
        pts.extend((float(x), float(y)) for x, y in blob)
        labels.extend([i] * n)
    return pts, labels, centers


def _scatter_cluster_case(task, seed, rng, canvas, spread, k=None):
    if k is None:
        k = int(rng.integers(2, 11))
    elif not 2 <= k <= 10:
        raise BadParams(f"cluster count must be in 2..10, got {k}")
    pts, labels, _ = _blob_points(rng, k, N_POINTS, BLOB_SIGMA * spread)
    image, _ = render_scatter(PointSet(tuple(pts)), opacity=1.0, canvas=canvas, bounds=((0, 1), (0, 1)))
    truth = True if task == TASK_SCATTER_CLUSTER else k
    return image, truth, {"clusters": k}


def _scatter_outlier_case(task, seed, rng, canvas, n_outliers):
    if not 1 <= n_outliers <= 5:
        raise BadParams(f"outlier count must be in 1..5, got {n_outliers}")
    pts, _, centers = _blob_points(rng, 1, N_POINTS - n_outliers, BLOB_SIGMA * 1.5)
    center = centers[0]
    outliers = []
    attempts = 0
    while len(outliers) < n_outliers:
        p = rng.uniform(0.05, 0.95, size=2)
        far_from_cloud = np.hypot(*(p - center)) >= 0.3
        separated = all(np.hypot(*(p - np.asarray(o))) >= 0.12 for o in outliers)
        if far_from_cloud and separated:
            outliers.append((float(p[0]), float(p[1])))
        attempts += 1
        if attempts > 10_000:
            raise BadParams("cannot place non-overlapping outliers")
    image, _ = render_scatter(
        PointSet(tuple(pts + outliers)), opacity=1.0, canvas=canvas, bounds=((0, 1), (0, 1))
    )
    truth = True if task == TASK_SCATTER_OUTLIER else n_outliers
    return image, truth, {"outliers": n_outliers}


def _correlated_points(rng, rho: float, n: int):
    x = rng.normal(0.0, 1.0, size=n)
    noise = rng.normal(0.0, 1.0, size=n)
    y = rho * x + np.sqrt(max(1.0 - rho * rho, 0.0)) * noise
    return [(float(a), float(b)) for a, b in zip(x, y)]


def _scatter_correlation_case(task, seed, rng, canvas):
    choices = [round(0.1 * i, 1) for i in range(1, 11)]
    rho_first = float(rng.choice(choices))
    rho_second = float(rng.choice([c for c in choices if c != rho_first]))
    half = CanvasConfig(
        width=canvas.width // 2, height=canvas.height, margin=canvas.margin, background=canvas.background
    )
    img_a, _ = render_scatter(PointSet(tuple(_correlated_points(rng, rho_first, N_POINTS))), 1.0, canvas=half)
    img_b, _ = render_scatter(PointSet(tuple(_correlated_points(rng, rho_second, N_POINTS))), 1.0, canvas=half)
    image = np.concatenate([img_a, img_b], axis=1)
    truth = "first" if rho_first > rho_second else "second"
    return image, truth, {"rho_first": rho_first, "rho_second": rho_second}


def _pc_rows(rng, k: int, n: int, sigma: float):
    centers = rng.uniform(0.15, 0.85, size=(k, PC_DIMS))
    counts = [n // k + (1 if i < n % k else 0) for i in range(k)]
    rows = []
    for c, cnt in zip(centers, counts):
        rows.extend(rng.normal(c, sigma, size=(cnt, PC_DIMS)).tolist())
    return rows


def _pc_cluster_case(task, seed, rng, canvas, k=None):
    if k is None:
        k = int(rng.integers(1, 11))
    elif not 1 <= k <= 10:
        raise BadParams(f"cluster count must be in 1..10, got {k}")
    rows = _pc_rows(rng, k, N_POINTS, 0.02)
    image = render_parallel_coords(rows, canvas=canvas)
    return image, k, {"clusters": k}


def _pc_outlier_case(task, seed, rng, canvas, n_outliers):
    if not 1 <= n_outliers <= 5:
        raise BadParams(f"outlier count must be in 1..5, got {n_outliers}")
    rows = _pc_rows(rng, 1, N_POINTS - n_outliers, 0.02)
    for _ in range(n_outliers):
        rows.append(rng.uniform(0.0, 1.0, size=PC_DIMS).tolist())
    image = render_parallel_coords(rows, canvas=canvas)
    return image, n_outliers, {"outliers": n_outliers}


def _pc_correlation_case(task, seed, rng, canvas):
    has_corr = bool(seed % 2 == 0)
    rows = rng.uniform(0.0, 1.0, size=(N_POINTS, PC_DIMS))
    pair = None
    if has_corr:
        i = int(rng.integers(0, PC_DIMS - 1))
        rows[:, i + 1] = rows[:, i] + rng.normal(0.0, 0.05, size=N_POINTS)
        pair = (i, i + 1)
    image = render_parallel_coords(rows.tolist(), canvas=canvas)
    return image, has_corr, {"correlated_pair": pair}


def _graph_case(task, seed, rng, canvas, query_present=None):
    names = list(string.ascii_uppercase[:GRAPH_NODES])
    adjacency = {n: [] for n in names}
    for i in range(GRAPH_NODES):
        for j in range(i + 1, GRAPH_NODES):
            if rng.random() < GRAPH_EDGE_P:
                adjacency[names[i]].append(names[j])
                adjacency[names[j]].append(names[i])
    positions = fr_layout(adjacency, iterations=150, seed=seed)
    image = render_node_link(adjacency, positions, canvas=canvas)
    n_edges = sum(len(v) for v in adjacency.values()) // 2
    detail = {"edges": n_edges, "adjacency": {k: list(v) for k, v in adjacency.items()}}

    if task == TASK_GRAPH_NODE_COUNT:
        return image, GRAPH_NODES, PROMPTS[task], detail
    if task == TASK_GRAPH_FIND_NODE:
        present = bool(seed % 2 == 0) if query_present is None else query_present
        node = str(rng.choice(names)) if present else "Z9"
        return image, present, PROMPTS[task].format(node=node), {**detail, "query": node}
    if task == TASK_GRAPH_CONNECTION:
        a, b = (str(x) for x in rng.choice(names, size=2, replace=False))
        reachable = _bfs_reachable(adjacency, a)
        return image, b in reachable, PROMPTS[task].format(a=a, b=b), {**detail, "query": [a, b]}
    # neighbor task
    node = str(rng.choice(names))
    truth = frozenset(adjacency[node])
    return image, truth, PROMPTS[task].format(node=node), {**detail, "query": node}


def _bfs_reachable(adjacency, start):
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def _volume_case(task, seed, rng, canvas):
    peak = VOLUME_PEAKS[seed % len(VOLUME_PEAKS)]
    on_band = bool((seed // len(VOLUME_PEAKS)) % 2 == 0)
    band = (100.0, 125.0)
    volume = band_phantom(band, dims=(24, 24, 24), seed=seed)
    window = band if on_band else (160.0, 185.0)
    tf = TriangularTF(start=window[0], end=window[1], peak_opacity=peak)
    camera = default_camera(volume.extent, image_size=(min(canvas.width, 256), min(canvas.height, 256)))
    result = render_volume(volume, tf, camera)
    verdict = oracle_assess_volume(result.structures, "target")
    truth = verdict.kind != NOT_RECOGNIZABLE
    detail = {"peak_opacity": peak, "window": list(window), "band": list(band), "oracle": verdict.kind}
    return result.image, truth, detail


def gen_case(task: str, seed: int, params: dict | None = None) -> BenchCase:
    """Generate one benchmark case; identical (task, seed, params) give
    byte-identical cases."""
    if task not in ALL_TASKS:
        raise BadParams(f"unknown benchmark task {task!r}")
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    canvas = CanvasConfig()

    if task in (TASK_SCATTER_CLUSTER, TASK_SCATTER_CLUSTER_COUNT):
        spread = float(params.get("spread", 1.0))
        k = int(params["clusters"]) if "clusters" in params else None
        image, truth, detail = _scatter_cluster_case(task, seed, rng, canvas, spread, k)
        prompt = PROMPTS[task]
    elif task in (TASK_SCATTER_OUTLIER, TASK_SCATTER_OUTLIER_COUNT):
        n_out = int(params.get("outliers", 1 + seed % 5))
        image, truth, detail = _scatter_outlier_case(task, seed, rng, canvas, n_out)
        prompt = PROMPTS[task]
    elif task == TASK_SCATTER_CORRELATION:
        image, truth, detail = _scatter_correlation_case(task, seed, rng, canvas)
        prompt = PROMPTS[task]
    elif task == TASK_PC_CLUSTER_COUNT:
        k = int(params["clusters"]) if "clusters" in params else None
        image, truth, detail = _pc_cluster_case(task, seed, rng, canvas, k)
        prompt = PROMPTS[task]
    elif task == TASK_PC_OUTLIER_COUNT:
        n_out = int(params.get("outliers", 1 + seed % 5))
        image, truth, detail = _pc_outlier_case(task, seed, rng, canvas, n_out)
        prompt = PROMPTS[task]
    elif task == TASK_PC_CORRELATION:
        image, truth, detail = _pc_correlation_case(task, seed, rng, canvas)
        prompt = PROMPTS[task]
    elif task.startswith("graph_"):
        image, truth, prompt, detail = _graph_case(task, seed, rng, canvas)
    else:  # volume_recognizable
        image, truth, detail = _volume_case(task, seed, rng, canvas)
        prompt = PROMPTS[task]

    return BenchCase(
        task=task,
        seed=seed,
        image_png=to_png(image),
        ground_truth=truth,
        prompt=prompt,
        detail=detail,
    )
