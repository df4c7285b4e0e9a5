"""Seeded 2-D embeddings: t-SNE via scikit-learn, UMAP via a compact
built-in implementation (kNN fuzzy graph + spectral init + SGD layout)."""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import eigsh
from sklearn.manifold import TSNE
from sklearn.neighbors import NearestNeighbors

PERPLEXITY_BOUNDS = (2.0, 100.0)
N_NEIGHBORS_BOUNDS = (2, 200)


def tsne_embedding(data: np.ndarray, perplexity: float, seed: int) -> np.ndarray:
    perplexity = float(min(perplexity, (len(data) - 1) / 3.0))  # sklearn requirement
    model = TSNE(
        n_components=2,
        perplexity=perplexity,
        random_state=int(seed),
        init="pca",
        learning_rate="auto",
    )
    return model.fit_transform(np.asarray(data, dtype=np.float64))


def _fuzzy_knn_graph(data: np.ndarray, n_neighbors: int):
    """Symmetrized exponential kNN affinities (the fuzzy-union construction)."""
    n = len(data)
    k = int(min(n_neighbors, n - 1))
    nn = NearestNeighbors(n_neighbors=k + 1).fit(data)
    dists, idx = nn.kneighbors(data)
    dists, idx = dists[:, 1:], idx[:, 1:]  # drop self

    rho = dists[:, 0:1]  # distance to the nearest neighbor
    scale = np.maximum(dists.mean(axis=1, keepdims=True) - rho, 1e-12)
    weights = np.exp(-np.maximum(dists - rho, 0.0) / scale)

    rows = np.repeat(np.arange(n), k)
    cols = idx.ravel()
    vals = weights.ravel()
    graph = coo_matrix((vals, (rows, cols)), shape=(n, n))
    graph = graph.maximum(graph.T).tocoo()  # fuzzy union
    return graph


def _spectral_init(graph, seed: int) -> np.ndarray:
    n = graph.shape[0]
    deg = np.asarray(graph.sum(axis=1)).ravel()
    deg = np.where(deg > 0, deg, 1.0)
    d_inv = 1.0 / np.sqrt(deg)
    lap = coo_matrix(
        (np.ones(n), (np.arange(n), np.arange(n))), shape=(n, n)
    ).tocsr() - graph.tocsr().multiply(d_inv[:, None]).multiply(d_inv[None, :])
    try:
        _, vecs = eigsh(lap, k=3, which="SM", v0=np.full(n, 1.0 / np.sqrt(n)), tol=1e-4, maxiter=2000)
        init = vecs[:, 1:3]
    except Exception:
        init = np.random.default_rng(seed).normal(0.0, 1.0, size=(n, 2))
    span = init.max(axis=0) - init.min(axis=0)
    span = np.where(span > 0, span, 1.0)
    return 10.0 * (init - init.min(axis=0)) / span


def umap_embedding(
    data: np.ndarray,
    n_neighbors: int,
    seed: int,
    n_epochs: int = 200,
    min_dist: float = 0.1,
    negative_samples: int = 5,
) -> np.ndarray:
    """Compact UMAP-style layout: attraction along fuzzy kNN edges, repulsion
    against negative samples, linearly decaying learning rate. Deterministic
    for a given (data, n_neighbors, seed)."""
    data = np.asarray(data, dtype=np.float64)
    graph = _fuzzy_knn_graph(data, n_neighbors).tocoo()
    pos = _spectral_init(graph, seed).astype(np.float64)
    n = len(data)
    rng = np.random.default_rng(seed)

    rows, cols = graph.row, graph.col
    weights = graph.data / graph.data.max()
    # curve constants approximating the min_dist membership curve
    a, b = (1.577, 0.895) if min_dist >= 0.1 else (1.93, 0.79)
    lr = 0.1

    for epoch in range(n_epochs):
        alpha = (1.0 - epoch / n_epochs) * lr
        keep = rng.random(len(rows)) < weights
        i, j = rows[keep], cols[keep]

        delta = pos[i] - pos[j]
        d2 = np.einsum("ij,ij->i", delta, delta)
        nz = d2 > 0.0
        grad = np.zeros_like(d2)
        grad[nz] = (-2.0 * a * b * d2[nz] ** (b - 1.0)) / (1.0 + a * d2[nz] ** b)
        move = np.clip(grad[:, None] * delta, -4.0, 4.0)
        np.add.at(pos, i, alpha * move)
        np.add.at(pos, j, -alpha * move)

        neg = rng.integers(0, n, size=(len(i), negative_samples))
        anchors = np.repeat(i, negative_samples)
        targets = neg.ravel()
        valid = anchors != targets
        anchors, targets = anchors[valid], targets[valid]
        delta = pos[anchors] - pos[targets]
        d2 = np.einsum("ij,ij->i", delta, delta)
        grad = (2.0 * b) / ((0.001 + d2) * (1.0 + a * d2**b))
        np.add.at(pos, anchors, alpha * np.clip(grad[:, None] * delta, -4.0, 4.0))

    return pos


def embed(data: np.ndarray, method: str, value: float, seed: int) -> np.ndarray:
    if method == "tsne":
        return tsne_embedding(data, perplexity=value, seed=seed)
    if method == "umap":
        return umap_embedding(data, n_neighbors=int(value), seed=seed)
    raise ValueError(f"unknown method {method!r}")
