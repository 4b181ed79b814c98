"""Equal-quantile baseline, fidelity metrics, coverage and representatives."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Dataset, FitConfig, PlliModel, sort_by_target
from .dp import build_model, predict_many
from .exceptions import DimensionMismatch, InsufficientData, TooFewPoints
from .local_models import feature_importance
from .segment_cost import SegmentCoster


@dataclass(frozen=True)
class EvalReport:
    mse_f: float
    mse_p: Optional[float]
    r2: Optional[float]
    n_eval: int

    def to_dict(self) -> dict:
        return {"mse_f": self.mse_f, "mse_p": self.mse_p, "r2": self.r2, "n_eval": self.n_eval}


def quantile_segments(n: int, H: int) -> list[tuple[int, int]]:
    cuts = [0] + [n * r // H for r in range(1, H)] + [n]
    return [(cuts[q], cuts[q + 1] - 1) for q in range(H)]


def fit_eq_plli(ds: Dataset, cfg: FitConfig, coster: Optional[SegmentCoster] = None) -> PlliModel:
    """Split the sorted data into H equal-count quantiles instead of optimizing."""
    if ds.n < cfg.H:
        raise InsufficientData(f"{ds.n} points cannot fill {cfg.H} quantiles")
    sd = sort_by_target(ds) if coster is None else coster.sd
    if coster is None:
        coster = SegmentCoster(sd, cfg)
    segments = quantile_segments(sd.n, cfg.H)
    total = 0.0
    for i, j in segments:
        total += coster.value(i, j)
    return build_model(sd, cfg, segments, coster, total)


def training_cost(model: PlliModel) -> float:
    return model.training_risk * sum(iv.stop - iv.start for iv in model.intervals)


def evaluate(model: PlliModel, ds: Dataset, labels=None) -> EvalReport:
    """MSE against the black-box values (routing by them) and optional labels."""
    if ds.d != model.d:
        raise DimensionMismatch(f"model expects {model.d} features, dataset has {ds.d}")
    pred, _ = predict_many(model, ds.features, ds.target)
    n = ds.n
    mse_f = math.fsum(((pred - ds.target) ** 2).tolist()) / n
    mse_p = r2 = None
    if labels is not None:
        lab = np.asarray(labels, dtype=float).reshape(-1)
        if lab.shape[0] != n:
            raise DimensionMismatch(f"{n} rows but {lab.shape[0]} labels")
        ss_res = math.fsum(((pred - lab) ** 2).tolist())
        mse_p = ss_res / n
        mean = math.fsum(lab.tolist()) / n
        ss_tot = math.fsum(((lab - mean) ** 2).tolist())
        if ss_tot > 0:
            r2 = 1.0 - ss_res / ss_tot
    return EvalReport(mse_f, mse_p, r2, n)


def coverage(points) -> float:
    """Mean distance from each point to its nearest other point."""
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.shape[0] < 2:
        raise TooFewPoints("coverage needs at least two points")
    D = np.sqrt(((P[:, None, :] - P[None, :, :]) ** 2).sum(axis=2))
    np.fill_diagonal(D, np.inf)
    return float(D.min(axis=1).mean())


@dataclass(frozen=True, eq=False)
class Representative:
    region_id: int
    centroid: np.ndarray
    nearest_row_id: object
    distance: float
    f_value: float
    importance: np.ndarray


@dataclass(frozen=True, eq=False)
class RepresentativeReport:
    records: list
    coverage_features: Optional[float]
    coverage_predictions: Optional[float]
    coverage_importances: Optional[float]


def representatives(model: PlliModel, ds: Dataset) -> RepresentativeReport:
    """One training row per region: the one closest to the region's centroid.

    Candidates are the rows routed to the region; a region that receives no
    rows falls back to the closest row overall.  The prediction coverage is
    taken over the black-box values of the chosen rows.
    """
    _, rid = predict_many(model, ds.features, ds.target)
    records = []
    for k, region in enumerate(model.regions):
        d = np.sqrt(((ds.features - region.centroid) ** 2).sum(axis=1))
        cand = np.flatnonzero(rid == k)
        if cand.size == 0:
            cand = np.arange(ds.n)
        best = int(cand[np.argmin(d[cand])])
        records.append(Representative(k, region.centroid, ds.row_ids[best], float(d[best]),
                                      float(ds.target[best]),
                                      feature_importance(region.model, region.feature_std)))
    if len(records) < 2:
        return RepresentativeReport(records, None, None, None)
    return RepresentativeReport(
        records,
        coverage([r.centroid for r in records]),
        coverage([r.f_value for r in records]),
        coverage([r.importance for r in records]),
    )
