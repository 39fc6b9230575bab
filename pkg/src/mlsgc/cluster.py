"""K-means over embedding rows and detectability scoring.

The final pipeline stage groups the rows of the spectral embedding with
Lloyd's algorithm under careful (distance-weighted) seeding and restarts.
Detectability scores a predicted labeling against planted clusters as the
best-permutation agreement fraction, computed exactly via optimal
assignment on the confusion matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import ClusterAssignment, MultilayerGraph, aggregate, as_layer_weights, laplacian
from .spectral import SpectralEmbedding, embedding


@dataclass(frozen=True)
class KMeansResult:
    """Outcome of the best restart: 1-based labels, centroids, inertia."""

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    iterations: int
    restarts_used: int


def _careful_seed(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    """Distance-weighted probabilistic seeding of K initial centroids."""
    n = X.shape[0]
    centers = np.empty((K, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    closest = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, K):
        total = closest.sum()
        if total <= 0.0:
            # All remaining points coincide with a chosen centroid.
            centers[j] = X[rng.integers(n)]
            continue
        centers[j] = X[rng.choice(n, p=closest / total)]
        closest = np.minimum(closest, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(
    X: np.ndarray,
    centers: np.ndarray,
    max_iter: int,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, float, int, list[float]]:
    """Lloyd iterations with empty-cluster repair; returns inertia history."""
    K = centers.shape[0]
    history: list[float] = []
    labels = np.zeros(X.shape[0], dtype=int)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        assigned = d2[np.arange(X.shape[0]), labels]
        # Repair: hand the point farthest from its centroid to each empty cluster.
        for k in range(K):
            if not np.any(labels == k):
                far = int(np.argmax(assigned))
                labels[far] = k
                assigned[far] = 0.0
        history.append(float(assigned.sum()))
        new_centers = np.array([X[labels == k].mean(axis=0) for k in range(K)])
        shift = float(np.linalg.norm(new_centers - centers, axis=1).max())
        centers = new_centers
        if shift < tol:
            break
    inertia = float(((X - centers[labels]) ** 2).sum())
    return labels, centers, inertia, iterations, history


def kmeans(
    points,
    K: int,
    seed=None,
    restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-8,
) -> KMeansResult:
    """K-means with careful seeding and restarts, deterministic per seed.

    Parameters
    ----------
    points : array-like, (n, d)
        Rows to cluster (embedding rows in the pipeline).
    K : int
        Number of clusters, ``2 <= K <= n``.
    seed : int or numpy seed, optional
        Root seed; restarts draw independent child streams from it, and the
        best restart is selected by (inertia, restart index) so the result
        does not depend on execution order.

    Returns
    -------
    KMeansResult
        Labels are 1-based cluster ids in ``1..K``.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if K < 2:
        raise ValueError(f"K={K} must be at least 2")
    if n < K:
        raise ValueError(f"cannot split {n} points into {K} clusters")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    children = np.random.SeedSequence(seed).spawn(restarts)
    best = None
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        centers0 = _careful_seed(X, K, rng)
        labels, centers, inertia, iters, _ = _lloyd(X, centers0, max_iter, tol)
        if best is None or inertia < best[0]:
            best = (inertia, r, labels, centers, iters)
    inertia, _, labels, centers, iters = best
    return KMeansResult(
        labels=labels + 1,
        centroids=centers,
        inertia=inertia,
        iterations=iters,
        restarts_used=restarts,
    )


def detectability(predicted, truth: ClusterAssignment) -> float:
    """Best-permutation agreement between predicted and planted labels.

    Maximizes, over all assignments of predicted ids to true ids, the
    fraction of nodes whose mapped predicted label equals the true label.
    The optimum is computed exactly on the K x K confusion matrix.
    """
    pred = np.asarray(predicted, dtype=int)
    if pred.ndim != 1 or pred.size != truth.n:
        raise ValueError(f"predicted has {pred.size} labels, truth has {truth.n}")
    K = truth.K
    if pred.min(initial=1) < 1 or pred.max(initial=1) > K:
        raise ValueError(f"predicted labels must lie in 1..{K}")
    confusion = np.zeros((K, K), dtype=int)
    np.add.at(confusion, (pred - 1, truth.labels - 1), 1)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    return float(confusion[rows, cols].sum()) / truth.n


def multilayer_sgc(
    g: MultilayerGraph,
    w,
    K: int,
    seed=None,
    restarts: int = 10,
) -> tuple[np.ndarray, SpectralEmbedding]:
    """Full pipeline: aggregate, Laplacian, embedding, K-means.

    Returns the predicted 1-based labels together with the intermediate
    SpectralEmbedding for diagnostics. Deterministic for a fixed
    (graph, weights, K, seed) tuple.
    """
    w = as_layer_weights(w)
    L_w = laplacian(aggregate(g, w))
    emb = embedding(L_w, K)
    result = kmeans(emb.Y, K, seed=seed, restarts=restarts)
    return result.labels, emb
