"""State abstraction: cluster stepwise outputs and derive state geometry.

Clustering runs on the probability vectors themselves.  The fitted state
set has k clustered states plus a distinguished start state at index 0
that is never the target of an assignment; its center is the uniform
label distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .teacher import Trace

KMEANS_MAX_ITER = 300
KMEANS_TOL = 1e-6


@dataclass
class AbstractStateSet:
    """k clustered output states plus the start state (index 0)."""

    n_clusters: int
    centroids: np.ndarray   # (k, m) assignment centroids
    centers: np.ndarray     # (k+1, m) state centers; row 0 = start state
    distance: np.ndarray    # (k+1, k+1) pairwise Euclidean distances
    cluster_sizes: np.ndarray  # (k,) members per cluster in the fit set

    @property
    def n_labels(self) -> int:
        return self.centers.shape[1]


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[j] = points[rng.integers(n)]
        else:
            centroids[j] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centroids[j]) ** 2, axis=1))
    return centroids


def _assign_nearest(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin over squared distances; ties resolve to the lowest index
    d2 = (np.sum(points ** 2, axis=1)[:, None]
          - 2.0 * points @ centroids.T
          + np.sum(centroids ** 2, axis=1)[None, :])
    return np.argmin(d2, axis=1)


def fit_states(outputs, k: int, seed: int = 0) -> AbstractStateSet:
    """Cluster output vectors with k-means (k-means++ init, fixed seed).

    Empty clusters are re-seeded at the point farthest from its current
    centroid.  Raises if there are fewer than k distinct outputs.
    """
    points = np.asarray(outputs, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("outputs must be a 2-D array of probability vectors")
    if k < 1:
        raise ValueError("k must be >= 1")
    if points.shape[0] < k or np.unique(points, axis=0).shape[0] < k:
        raise ValueError("k too large")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, k, rng)
    labels = _assign_nearest(points, centroids)
    for _ in range(KMEANS_MAX_ITER):
        new_centroids = centroids.copy()
        for j in range(k):
            members = points[labels == j]
            if members.shape[0] == 0:
                far = np.argmax(np.sum((points - centroids[j]) ** 2, axis=1))
                new_centroids[j] = points[far]
            else:
                new_centroids[j] = members.mean(axis=0)
        shift = np.max(np.linalg.norm(new_centroids - centroids, axis=1))
        centroids = new_centroids
        labels = _assign_nearest(points, centroids)
        if shift < KMEANS_TOL:
            break

    m = points.shape[1]
    centers = np.empty((k + 1, m))
    centers[0] = np.full(m, 1.0 / m)
    sizes = np.empty(k, dtype=np.int64)
    for j in range(k):
        members = points[labels == j]
        sizes[j] = members.shape[0]
        centers[j + 1] = members.mean(axis=0) if sizes[j] else centroids[j]
    diff = centers[:, None, :] - centers[None, :, :]
    distance = np.sqrt(np.sum(diff ** 2, axis=2))
    np.fill_diagonal(distance, 0.0)
    return AbstractStateSet(n_clusters=k, centroids=centroids, centers=centers,
                            distance=distance, cluster_sizes=sizes)


def assign(states: AbstractStateSet, o) -> int:
    """Map one output vector to its abstract state index in 1..k."""
    o = np.asarray(o, dtype=np.float64)
    return int(_assign_nearest(o[None, :], states.centroids)[0]) + 1


def assign_many(states: AbstractStateSet, outputs) -> np.ndarray:
    """Vectorized `assign` over rows; returns indices in 1..k."""
    points = np.asarray(outputs, dtype=np.float64)
    return _assign_nearest(points, states.centroids) + 1


def trace_to_transitions(states: AbstractStateSet, trace: Trace):
    """Turn one trace into (from-state, token, to-state) triples.

    The first triple leaves the start state 0; thereafter the source is
    the state reached on the previous prefix.
    """
    dest = assign_many(states, trace.outputs)
    triples = []
    prev = 0
    for word, d in zip(trace.sentence.words, dest):
        triples.append((prev, word, int(d)))
        prev = int(d)
    return triples
