"""Optimal range partitioning: value/index tables, reconstruction, prediction.

``V[p, q]`` is the smallest total (unnormalized) loss of splitting the first
``p`` sorted points into ``q`` non-empty range intervals, each covered by W
k-means regions with fitted local models.  ``Phi[p, q]`` is the number of
points that go to the first ``q - 1`` intervals in that optimum.

Split candidates for cell ``(p, q)`` are ``q - 1, q - 1 + stride, ...`` up to
``p - 1``; ``stride = 1`` is the exact recursion.  The cost matrix is
evaluated three ways depending on the configuration:

* W = 1 with constant models: O(1) prefix-sum costs inside the kernel.
* W = 1, linear, unclipped, H >= 3: the dense linear cost kernel.
* everything else: only the segments the recursion touches are evaluated,
  through k-means and per-cluster fits.  In this mode row ``q = H`` is
  filled only at ``p = n`` and the other cells of that row are NaN.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .core import Dataset, FitConfig, Interval, PlliModel, Region, SortedDataset, sort_by_target
from .exceptions import DimensionMismatch, InconsistentTables, InsufficientData, NumericalFailure
from .kmeans import nearest_centroid
from .local_models import predict_local, predict_local_many
from .segment_cost import SegmentCoster


@dataclass(frozen=True, eq=False)
class ValueIndexTables:
    V: np.ndarray
    Phi: np.ndarray
    full: bool
    coster: SegmentCoster

    @property
    def n(self) -> int:
        return self.V.shape[0] - 1

    @property
    def H(self) -> int:
        return self.V.shape[1] - 1

    @property
    def optimal_cost(self) -> float:
        return float(self.V[self.n, self.H])


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("PLLI_THREADS", "1")))
    except ValueError:
        return 1


def _needed_segments(n: int, H: int, stride: int) -> list[tuple[int, int]]:
    """Segments the recursion reads when the last row is filled only at p = n."""
    need = set()
    if H == 1:
        need.add((0, n - 1))
        return sorted(need)
    for p in range(2, n + 1):
        need.add((0, p - 1))
    for q in range(2, H + 1):
        ps = range(q, n + 1) if q < H else [n]
        for p in ps:
            for c in range(q - 1, p, stride):
                need.add((c, p - 1))
    return sorted(need)


def _lazy_cost_matrix(coster: SegmentCoster, n: int, H: int, stride: int) -> np.ndarray:
    G = np.full((n, n), np.nan)
    keys = _needed_segments(n, H, stride)
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda k: coster.value(*k), keys))
    else:
        values = [coster.value(i, j) for i, j in keys]
    for (i, j), v in zip(keys, values):
        G[i, j] = v
    return G


def compute_value_index(sd: SortedDataset, cfg: FitConfig,
                        coster: Optional[SegmentCoster] = None) -> ValueIndexTables:
    n = sd.n
    if n < cfg.H:
        raise InsufficientData(f"{n} points cannot fill {cfg.H} non-empty intervals")
    if coster is None:
        coster = SegmentCoster(sd, cfg)
    if coster.uses_prefix:
        o = coster.oracle
        V, Phi = kernels.dp_prefix(o.prefix_sum, o.prefix_sumsq, o.centered, cfg.H,
                                   kernels.loss_code(cfg.loss), cfg.stride)
        full = True
    elif cfg.W == 1 and cfg.model_family == "linear" and cfg.clip_range is None and cfg.H >= 3:
        G = kernels.linear_cost_matrix(sd.X, sd.y, cfg.ridge_epsilon)
        if np.isnan(G).any():
            raise NumericalFailure("singular normal equations in a segment after the ridge fallback")
        V, Phi = kernels.dp_dense(G, cfg.H, cfg.stride, True)
        full = True
    else:
        G = _lazy_cost_matrix(coster, n, cfg.H, cfg.stride)
        V, Phi = kernels.dp_dense(G, cfg.H, cfg.stride, False)
        full = False
    return ValueIndexTables(np.asarray(V), np.asarray(Phi), full, coster)


def partition_segments(tables: ValueIndexTables) -> list[tuple[int, int]]:
    """Walk ``Phi`` back from ``(n, H)``; returns inclusive ``(start, end)`` per interval."""
    n, H = tables.n, tables.H
    segs = []
    p = n
    for q in range(H, 0, -1):
        c = int(tables.Phi[p, q])
        if not (q - 1 <= c < p) or (q == 1 and c != 0):
            raise InconsistentTables(f"bad split index {c} at cell ({p}, {q})")
        segs.append((c, p - 1))
        p = c
    return segs[::-1]


def build_model(sd: SortedDataset, cfg: FitConfig, segments, coster: SegmentCoster,
                training_cost: float) -> PlliModel:
    """Assemble a :class:`PlliModel` from contiguous sorted-index segments."""
    y = sd.y
    bounds = [(y[segments[q][1]] + y[segments[q + 1][0]]) / 2.0 for q in range(len(segments) - 1)]
    intervals = []
    for q, (i, j) in enumerate(segments):
        rec = coster.record(i, j)
        lo = bounds[q - 1] if q > 0 else float(y[i])
        hi = bounds[q] if q < len(bounds) else float(y[j])
        regions = tuple(
            Region(rec.centroids[u].copy(), rec.models[u], rec.sizes[u], rec.feature_stds[u].copy())
            for u in range(rec.effective_w))
        intervals.append(Interval(float(lo), float(hi), regions, i, j + 1))
    return PlliModel(np.array(bounds, dtype=float), tuple(intervals), cfg,
                     float(training_cost) / sd.n, sd.base.column_names)


def reconstruct_partition(tables: ValueIndexTables, sd: SortedDataset, cfg: FitConfig) -> PlliModel:
    segments = partition_segments(tables)
    return build_model(sd, cfg, segments, tables.coster, tables.optimal_cost)


def fit_plli(ds: Dataset, cfg: FitConfig) -> PlliModel:
    sd = sort_by_target(ds)
    tables = compute_value_index(sd, cfg)
    return reconstruct_partition(tables, sd, cfg)


def interval_of(model: PlliModel, f_value: float) -> int:
    """Interval whose half-open range ``(low, high]`` holds ``f_value``.

    The first and last intervals extend to -inf and +inf.
    """
    return int(np.searchsorted(model.boundaries, f_value, side="left"))


def predict(model: PlliModel, x, f_value: Optional[float] = None) -> tuple[float, int]:
    """Prediction and global region id for one row.

    Without ``f_value`` the region is the nearest centroid over all regions,
    an extension for scoring inputs whose black-box value is unknown.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != model.d:
        raise DimensionMismatch(f"model expects {model.d} features, got {x.shape[0]}")
    if f_value is None:
        centroids = np.array([r.centroid for r in model.regions])
        rid = nearest_centroid(x, centroids)
    else:
        q = interval_of(model, f_value)
        offset = sum(len(iv.regions) for iv in model.intervals[:q])
        rid = offset + nearest_centroid(x, model.intervals[q].centroids)
    return predict_local(model.regions[rid].model, x), rid


def assign_regions(model: PlliModel, X, f_values=None) -> np.ndarray:
    """Vectorized region routing with the same rules as :func:`predict`."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.d:
        raise DimensionMismatch(f"model expects {model.d} features")
    regions = model.regions
    C = np.array([r.centroid for r in regions])
    D = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    if f_values is not None:
        iv_of_region = np.array(model.region_interval())
        q = np.searchsorted(model.boundaries, np.asarray(f_values, dtype=float), side="left")
        D = np.where(iv_of_region[None, :] == q[:, None], D, np.inf)
    return np.argmin(D, axis=1)


def predict_many(model: PlliModel, X, f_values=None) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    rid = assign_regions(model, X, f_values)
    out = np.empty(X.shape[0])
    for k, region in enumerate(model.regions):
        mask = rid == k
        if mask.any():
            out[mask] = predict_local_many(region.model, X[mask])
    return out, rid
