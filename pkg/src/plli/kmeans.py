"""Seeded, deterministic k-means (k-means++ start, Lloyd iterations)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptyCentroidList, ValidationError

MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class KmeansResult:
    centroids: np.ndarray
    assignment: np.ndarray
    inertia: float
    effective_k: int
    n_iter: int = 0
    converged: bool = True
    inertia_trace: tuple = field(default=())


def _sq_dists(X, C):
    # explicit differences, not the |x|^2 - 2xc + |c|^2 expansion: ties must be exact
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def nearest_centroid(x, centroids) -> int:
    """Index of the closest centroid; ties go to the lowest index."""
    C = np.asarray(centroids, dtype=float)
    if C.size == 0:
        raise EmptyCentroidList("no centroids to choose from")
    if C.ndim == 1:
        C = C.reshape(-1, 1)
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return int(np.argmin(_sq_dists(x, C)[0]))


def _plusplus(X, k, rng):
    m = X.shape[0]
    centers = [int(rng.integers(m))]
    d2 = ((X - X[centers[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        cum = np.cumsum(d2)
        u = rng.random() * cum[-1]
        idx = int(np.searchsorted(cum, u, side="right"))
        idx = min(idx, m - 1)
        centers.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[centers].copy()


def _means(X, assign, k):
    C = np.empty((k, X.shape[1]))
    for c in range(k):
        C[c] = X[assign == c].mean(axis=0)
    return C


def _repair_empty(X, assign, C, k):
    """Move the point farthest from its centroid into each empty cluster."""
    assign = assign.copy()
    counts = np.bincount(assign, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            continue
        d = ((X - C[assign]) ** 2).sum(axis=1)
        d[counts[assign] <= 1] = -1.0
        far = int(np.argmax(d))
        counts[assign[far]] -= 1
        assign[far] = j
        counts[j] = 1
        C[j] = X[far]
    return assign


def kmeans(points, k: int, seed: int = 0, max_iter: int = MAX_ITER) -> KmeansResult:
    """Cluster ``points`` into at most ``k`` groups.

    The random stream depends only on ``(seed, m, k)``, so identical inputs
    always give bit-identical results.  ``k`` is reduced to the number of
    distinct points when there are fewer.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    m = X.shape[0]
    if m < 1:
        raise ValidationError("k-means needs at least one point")
    if k < 1:
        raise ValidationError("k must be positive")
    keff = min(int(k), np.unique(X, axis=0).shape[0])
    if keff == 1:
        c = X.mean(axis=0, keepdims=True)
        inertia = float(((X - c) ** 2).sum())
        return KmeansResult(c, np.zeros(m, dtype=np.intp), inertia, 1, 0, True, (inertia,))

    rng = np.random.default_rng(np.random.SeedSequence([int(seed), m, int(k)]))
    C = _plusplus(X, keff, rng)
    assign = np.argmin(_sq_dists(X, C), axis=1)
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        assign = _repair_empty(X, assign, C, keff)
        C = _means(X, assign, keff)
        trace.append(float(((X - C[assign]) ** 2).sum()))
        new = np.argmin(_sq_dists(X, C), axis=1)
        if np.array_equal(new, assign):
            converged = True
            break
        assign = new
    if not converged:
        assign = _repair_empty(X, assign, C, keff)
        C = _means(X, assign, keff)
    inertia = float(((X - C[assign]) ** 2).sum())
    return KmeansResult(C, assign.astype(np.intp), inertia, keff, it, converged, tuple(trace))
