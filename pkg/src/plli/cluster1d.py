"""Optimal contiguous clustering of scalar values.

This is the range-partitioning DP with one constant model per interval; the
optimum over ordered partitions is the optimum over all partitions of the
line.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import KTooLarge, TooLargeForOracle, ValidationError
from .local_models import fit_constant
from .segment_cost import PrefixOracle

ORACLE_MAX_N = 20


@dataclass(frozen=True, eq=False)
class Clustering1D:
    """``boundaries[r]`` is the sorted position where cluster ``r + 1`` starts."""

    boundaries: tuple[int, ...]
    centers: tuple[float, ...]
    total_cost: float
    sorted_values: np.ndarray
    loss: str = "squared"

    @property
    def K(self) -> int:
        return len(self.centers)

    def clusters(self) -> list[np.ndarray]:
        edges = (0,) + tuple(self.boundaries) + (self.sorted_values.shape[0],)
        return [self.sorted_values[a:b] for a, b in zip(edges[:-1], edges[1:])]

    def labels(self) -> np.ndarray:
        """Cluster index of every sorted value."""
        return np.searchsorted(np.asarray(self.boundaries), np.arange(self.sorted_values.shape[0]),
                               side="right")


def _prepare(values, K, loss):
    v = np.sort(np.asarray(values, dtype=float).reshape(-1), kind="stable")
    if v.size == 0:
        raise ValidationError("no values to cluster")
    if not np.all(np.isfinite(v)):
        raise ValidationError("values must be finite")
    if loss not in ("squared", "absolute"):
        raise ValidationError(f"unknown loss {loss!r}")
    if K < 1:
        raise ValidationError("K must be positive")
    if K > v.size:
        raise KTooLarge(f"K={K} exceeds the number of values ({v.size})")
    return v


def _from_boundaries(v, boundaries, loss, total=None):
    edges = (0,) + tuple(boundaries) + (v.size,)
    centers, costs = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        fr = fit_constant(v[a:b], loss)
        centers.append(fr.model.intercept)
        costs.append(fr.cost)
    if total is None:
        total = float(sum(costs))
    return Clustering1D(tuple(int(b) for b in boundaries), tuple(centers), float(total), v, loss)


def cluster_1d(values, K: int, loss: str = "squared") -> Clustering1D:
    """Globally optimal split of ``values`` into ``K`` contiguous clusters."""
    v = _prepare(values, K, loss)
    n = v.size
    oracle = PrefixOracle(v)
    V, Phi = kernels.dc_prefix(oracle.prefix_sum, oracle.prefix_sumsq, oracle.centered, K,
                               kernels.loss_code(loss))
    bounds = []
    p = n
    for q in range(K, 1, -1):
        c = int(Phi[p, q])
        bounds.append(c)
        p = c
    return _from_boundaries(v, bounds[::-1], loss, total=float(V[n, K]))


def _direct_cost(seg, loss):
    if loss == "squared":
        m = sum(seg) / len(seg)
        return sum((x - m) ** 2 for x in seg)
    med = sorted(seg)[(len(seg) - 1) // 2]
    return sum(abs(x - med) for x in seg)


def brute_force_1d(values, K: int, loss: str = "squared") -> Clustering1D:
    """Exhaustive scan of every contiguous K-split; ties keep the first found."""
    v = _prepare(values, K, loss)
    n = v.size
    if n > ORACLE_MAX_N:
        raise TooLargeForOracle(f"brute force is limited to n <= {ORACLE_MAX_N}")
    vals = v.tolist()
    best, best_cuts = None, None
    for cuts in itertools.combinations(range(1, n), K - 1):
        edges = (0,) + cuts + (n,)
        cost = sum(_direct_cost(vals[a:b], loss) for a, b in zip(edges[:-1], edges[1:]))
        if best is None or cost < best:
            best, best_cuts = cost, cuts
    return _from_boundaries(v, best_cuts, loss, total=best)


def check_midpoint_property(c: Clustering1D, values=None) -> bool:
    """Every value sits on its own side of the midpoint between adjacent centers."""
    if values is not None:
        v = np.sort(np.asarray(values, dtype=float).reshape(-1), kind="stable")
        c = Clustering1D(c.boundaries, c.centers, c.total_cost, v, c.loss)
    groups = c.clusters()
    for r in range(len(groups) - 1):
        mid = (c.centers[r] + c.centers[r + 1]) / 2.0
        if np.any(groups[r] > mid) or np.any(groups[r + 1] < mid):
            return False
    return True
