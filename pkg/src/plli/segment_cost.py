"""Cost of covering a run of sorted points with W k-means regions.

A segment ``[i, j]`` is an inclusive range of positions in the sorted order.
Its cost is the sum, over the k-means clusters of its features, of the
optimal local-model loss on each cluster.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import FitConfig, LocalModel, SortedDataset
from .exceptions import IndexOutOfRange, InvertedRange
from .kmeans import kmeans
from .local_models import fit_constant, fit_linear


@dataclass(frozen=True, eq=False)
class CostRecord:
    cost: float
    centroids: np.ndarray
    models: tuple[LocalModel, ...]
    effective_w: int
    sizes: tuple[int, ...]
    feature_stds: np.ndarray
    start: int
    stop: int

    def __eq__(self, other):
        if not isinstance(other, CostRecord):
            return NotImplemented
        return (self.cost == other.cost and self.effective_w == other.effective_w
                and self.sizes == other.sizes and self.models == other.models
                and np.array_equal(self.centroids, other.centroids)
                and np.array_equal(self.feature_stds, other.feature_stds))


class PrefixOracle:
    """O(1) constant-model segment costs over a sorted value sequence.

    Values are shifted by their mean before the compensated prefix sums are
    taken; the costs are shift invariant and the shift limits cancellation.
    """

    def __init__(self, values):
        v = np.asarray(values, dtype=float).reshape(-1)
        self.n = v.shape[0]
        self.shift = float(np.mean(v)) if self.n else 0.0
        self.centered = v - self.shift
        self.prefix_sum = kernels.compensated_cumsum(self.centered)
        self.prefix_sumsq = kernels.compensated_cumsum(self.centered * self.centered)

    def _check(self, i, j):
        if i > j:
            raise InvertedRange(f"segment [{i}, {j}] is inverted")
        if i < 0 or j >= self.n:
            raise IndexOutOfRange(f"segment [{i}, {j}] outside 0..{self.n - 1}")

    def query(self, i: int, j: int) -> float:
        """Sum of squared deviations from the mean of ``values[i..j]``."""
        self._check(i, j)
        if i == j:
            return 0.0
        m = j - i + 1
        s = self.prefix_sum[j + 1] - self.prefix_sum[i]
        c = (self.prefix_sumsq[j + 1] - self.prefix_sumsq[i]) - s * s / m
        return max(float(c), 0.0)

    def query_absolute(self, i: int, j: int) -> float:
        """Sum of absolute deviations from the lower median; needs sorted values."""
        self._check(i, j)
        return float(kernels.segment_costs_to(self.prefix_sum, self.prefix_sumsq, self.centered,
                                              i, i, j, kernels.ABSOLUTE)[0])

    def cost(self, i: int, j: int, loss: str) -> float:
        return self.query(i, j) if loss == "squared" else self.query_absolute(i, j)


def build_prefix_oracle(values) -> PrefixOracle:
    return PrefixOracle(values)


def segment_slice(sd: SortedDataset, i: int, j: int):
    """Features and targets of sorted positions ``i..j`` (views, no copy)."""
    if i > j:
        raise InvertedRange(f"segment [{i}, {j}] is inverted")
    if i < 0 or j >= sd.n:
        raise IndexOutOfRange(f"segment [{i}, {j}] outside 0..{sd.n - 1}")
    return sd.X[i:j + 1], sd.y[i:j + 1]


def segment_seed(seed: int, i: int, j: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(i), int(j)]).generate_state(1, np.uint32)[0])


def segment_cost(sd: SortedDataset, i: int, j: int, cfg: FitConfig) -> CostRecord:
    X, y = segment_slice(sd, i, j)
    km = kmeans(X, cfg.W, seed=segment_seed(cfg.seed, i, j))
    models, costs, sizes, stds = [], [], [], []
    for c in range(km.effective_k):
        mask = km.assignment == c
        Xc, yc = X[mask], y[mask]
        if cfg.model_family == "constant":
            fr = fit_constant(yc, cfg.loss, dim=sd.d)
        else:
            fr = fit_linear(Xc, yc, cfg.ridge_epsilon, cfg.clip_range)
        models.append(fr.model)
        costs.append(fr.cost)
        sizes.append(int(mask.sum()))
        stds.append(Xc.std(axis=0))
    total = 0.0
    for c in costs:
        total += c
    return CostRecord(total, km.centroids, tuple(models), km.effective_k, tuple(sizes),
                      np.array(stds), i, j + 1)


class SegmentCoster:
    """Memoized :func:`segment_cost` for one ``(sd, cfg)`` pair.

    Safe for concurrent calls on distinct or equal keys: a segment may be
    computed twice by racing threads, but both results are identical.
    """

    def __init__(self, sd: SortedDataset, cfg: FitConfig):
        self.sd = sd
        self.cfg = cfg
        self._memo: dict[tuple[int, int], CostRecord] = {}
        self._lock = threading.Lock()
        self._oracle = None

    @property
    def oracle(self) -> PrefixOracle:
        if self._oracle is None:
            self._oracle = PrefixOracle(self.sd.y)
        return self._oracle

    @property
    def uses_prefix(self) -> bool:
        return self.cfg.W == 1 and self.cfg.model_family == "constant"

    def record(self, i: int, j: int) -> CostRecord:
        key = (i, j)
        rec = self._memo.get(key)
        if rec is None:
            rec = segment_cost(self.sd, i, j, self.cfg)
            with self._lock:
                rec = self._memo.setdefault(key, rec)
        return rec

    def value(self, i: int, j: int) -> float:
        """Segment cost as seen by the DP."""
        if self.uses_prefix:
            return self.oracle.cost(i, j, self.cfg.loss)
        return self.record(i, j).cost

    def __len__(self):
        return len(self._memo)
