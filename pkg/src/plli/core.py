"""Domain types and the sort-by-prediction preprocessing.

Every downstream module works on a :class:`SortedDataset`: the rows of a
:class:`Dataset` reordered by ascending black-box value.  Indices used by the
segment-cost and dynamic-programming code are positions in that sorted order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .exceptions import (
    DimensionMismatch,
    EmptyTable,
    MissingTargetColumn,
    NonFiniteValue,
    ValidationError,
)

LOSSES = ("squared", "absolute")
MODEL_FAMILIES = ("linear", "constant")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix plus one black-box prediction per row."""

    features: np.ndarray
    target: np.ndarray
    column_names: tuple[str, ...]
    row_ids: tuple

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        y = np.array(self.target, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or y.ndim != 1:
            raise DimensionMismatch("features must be n x d and target length n")
        n, d = X.shape
        if n < 1 or d < 1:
            raise EmptyTable("dataset needs at least one row and one feature column")
        if y.shape[0] != n:
            raise DimensionMismatch(f"{n} feature rows but {y.shape[0]} targets")
        names = tuple(self.column_names) if self.column_names is not None else tuple(
            f"x{j + 1}" for j in range(d))
        if len(names) != d:
            raise DimensionMismatch(f"{d} feature columns but {len(names)} names")
        ids = tuple(self.row_ids) if self.row_ids is not None else tuple(range(n))
        if len(ids) != n:
            raise DimensionMismatch(f"{n} rows but {len(ids)} row ids")
        if len(set(ids)) != n:
            raise ValidationError("row_ids must be unique")
        bad = ~np.isfinite(X)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise NonFiniteValue(ids[r], names[c])
        bad = ~np.isfinite(y)
        if bad.any():
            raise NonFiniteValue(ids[int(np.argmax(bad))], "<target>")
        object.__setattr__(self, "features", _frozen(X))
        object.__setattr__(self, "target", _frozen(y))
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "row_ids", ids)

    @classmethod
    def from_arrays(cls, features, target, column_names=None, row_ids=None) -> "Dataset":
        return cls(features, target, column_names, row_ids)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def take(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=int)
        return Dataset(self.features[rows], self.target[rows], self.column_names,
                       tuple(self.row_ids[r] for r in rows))


@dataclass(frozen=True, eq=False)
class SortedDataset:
    """A dataset viewed in ascending order of its black-box values.

    ``order[i]`` is the original row index of the i-th smallest target; ties
    keep their original relative order.
    """

    base: Dataset
    order: np.ndarray

    @cached_property
    def X(self) -> np.ndarray:
        return _frozen(self.base.features[self.order])

    @cached_property
    def y(self) -> np.ndarray:
        return _frozen(self.base.target[self.order])

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def d(self) -> int:
        return self.base.d

    def inverse_order(self) -> np.ndarray:
        inv = np.empty_like(self.order)
        inv[self.order] = np.arange(self.order.size)
        return inv


def validate_dataset(rows, target_column: str, row_ids: Optional[Sequence] = None) -> Dataset:
    """Build a :class:`Dataset` from an in-memory table.

    ``rows`` is either a mapping ``column -> values`` or a sequence of
    mappings (one per row).  All values must parse as finite floats.
    """
    if isinstance(rows, Mapping):
        columns = list(rows.keys())
        table = {c: list(rows[c]) for c in columns}
        n = len(table[columns[0]]) if columns else 0
    else:
        rows = list(rows)
        if not rows:
            raise EmptyTable("table has no rows")
        columns = list(rows[0].keys())
        table = {c: [r[c] for r in rows] for c in columns}
        n = len(rows)
    if n < 1 or not columns:
        raise EmptyTable("table has no rows")
    if target_column not in table:
        raise MissingTargetColumn(f"no column named {target_column!r}")
    feature_cols = [c for c in columns if c != target_column]
    if not feature_cols:
        raise EmptyTable("table has no feature columns besides the target")
    ids = list(row_ids) if row_ids is not None else list(range(n))

    def parse(col):
        out = np.empty(n)
        for r, v in enumerate(table[col]):
            try:
                out[r] = float(v)
            except (TypeError, ValueError):
                raise ValidationError(f"row {ids[r]}, column {col!r}: not a number: {v!r}") from None
            if not np.isfinite(out[r]):
                raise NonFiniteValue(ids[r], col)
        return out

    y = parse(target_column)
    X = np.column_stack([parse(c) for c in feature_cols])
    return Dataset(X, y, tuple(feature_cols), tuple(ids))


def sort_by_target(ds: Dataset) -> SortedDataset:
    order = np.argsort(ds.target, kind="stable")
    return SortedDataset(ds, _frozen(order))


@dataclass(frozen=True)
class FitConfig:
    H: int = 2
    W: int = 2
    loss: str = "squared"
    model_family: str = "linear"
    clip_range: Optional[tuple[float, float]] = None
    stride: int = 1
    seed: int = 0
    ridge_epsilon: float = 1e-8

    def __post_init__(self):
        for name in ("H", "W", "stride"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.loss not in LOSSES:
            raise ValidationError(f"loss must be one of {LOSSES}, got {self.loss!r}")
        if self.model_family not in MODEL_FAMILIES:
            raise ValidationError(f"model_family must be one of {MODEL_FAMILIES}")
        if self.loss == "absolute" and self.model_family == "linear":
            raise ValidationError("absolute loss is only supported with constant models")
        if not self.ridge_epsilon >= 0 or not np.isfinite(self.ridge_epsilon):
            raise ValidationError("ridge_epsilon must be a finite non-negative real")
        if self.clip_range is not None:
            lo, hi = (float(v) for v in self.clip_range)
            if not lo < hi:
                raise ValidationError("clip_range must satisfy lo < hi")
            object.__setattr__(self, "clip_range", (lo, hi))
        object.__setattr__(self, "H", int(self.H))
        object.__setattr__(self, "W", int(self.W))
        object.__setattr__(self, "stride", int(self.stride))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def K(self) -> int:
        return self.H * self.W

    def to_dict(self) -> dict:
        return {
            "H": self.H,
            "W": self.W,
            "loss": self.loss,
            "model_family": self.model_family,
            "clip_range": list(self.clip_range) if self.clip_range else None,
            "stride": self.stride,
            "seed": self.seed,
            "ridge_epsilon": self.ridge_epsilon,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FitConfig":
        d = dict(d)
        if d.get("clip_range") is not None:
            d["clip_range"] = tuple(d["clip_range"])
        return cls(**d)


@dataclass(frozen=True, eq=False)
class LocalModel:
    """``b . x + c``, optionally clipped; constant models have ``b = 0``."""

    kind: str
    coefficients: np.ndarray
    intercept: float
    clip: Optional[tuple[float, float]] = None

    def __post_init__(self):
        b = _frozen(np.asarray(self.coefficients, dtype=float).reshape(-1))
        if self.kind not in MODEL_FAMILIES:
            raise ValidationError(f"unknown model kind {self.kind!r}")
        if self.kind == "constant" and np.any(b != 0):
            raise ValidationError("constant models must have all-zero coefficients")
        object.__setattr__(self, "coefficients", b)
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def d(self) -> int:
        return self.coefficients.shape[0]

    def __eq__(self, other):
        if not isinstance(other, LocalModel):
            return NotImplemented
        return (self.kind == other.kind and self.intercept == other.intercept
                and self.clip == other.clip
                and np.array_equal(self.coefficients, other.coefficients))


@dataclass(frozen=True, eq=False)
class Region:
    centroid: np.ndarray
    model: LocalModel
    size: int
    feature_std: np.ndarray


@dataclass(frozen=True, eq=False)
class Interval:
    """One range interval: ``f_low``/``f_high`` and its feature-space regions.

    ``start``/``stop`` are the half-open sorted-index range used at fit time.
    """

    f_low: float
    f_high: float
    regions: tuple[Region, ...]
    start: int
    stop: int

    @property
    def centroids(self) -> np.ndarray:
        return np.array([r.centroid for r in self.regions])

    @property
    def models(self) -> list[LocalModel]:
        return [r.model for r in self.regions]


@dataclass(frozen=True, eq=False)
class PlliModel:
    boundaries: np.ndarray
    intervals: tuple[Interval, ...]
    config: FitConfig
    training_risk: float
    column_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "boundaries", _frozen(np.asarray(self.boundaries, dtype=float)))
        object.__setattr__(self, "intervals", tuple(self.intervals))
        if self.boundaries.shape[0] != len(self.intervals) - 1:
            raise ValidationError("need exactly one boundary between consecutive intervals")
        if np.any(np.diff(self.boundaries) < 0):
            raise ValidationError("interval boundaries must be increasing")
        for iv in self.intervals:
            if not 1 <= len(iv.regions) <= self.config.W:
                raise ValidationError("each interval holds between 1 and W regions")

    @property
    def regions(self) -> list[Region]:
        return [r for iv in self.intervals for r in iv.regions]

    @property
    def n_regions(self) -> int:
        return sum(len(iv.regions) for iv in self.intervals)

    @property
    def d(self) -> int:
        return self.intervals[0].regions[0].centroid.shape[0]

    def region_interval(self) -> list[int]:
        """Interval index of every global region id."""
        return [q for q, iv in enumerate(self.intervals) for _ in iv.regions]
