"""JSON persistence for fitted models.

Floats are written with ``repr`` precision, keys sorted, so that
save -> load -> save reproduces the file byte for byte.
"""
from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .core import FitConfig, Interval, LocalModel, PlliModel, Region
from .exceptions import ValidationError

FORMAT_VERSION = 1


def _floats(a) -> list:
    return [float(v) for v in np.asarray(a, dtype=float).reshape(-1)]


def model_to_dict(model: PlliModel, metadata: Optional[dict] = None) -> dict:
    intervals = []
    for iv in model.intervals:
        regions = []
        for r in iv.regions:
            m = r.model
            regions.append({
                "centroid": _floats(r.centroid),
                "feature_std": _floats(r.feature_std),
                "size": int(r.size),
                "model": {
                    "kind": m.kind,
                    "coefficients": _floats(m.coefficients),
                    "intercept": float(m.intercept),
                    "clip": list(m.clip) if m.clip is not None else None,
                },
            })
        intervals.append({"f_low": float(iv.f_low), "f_high": float(iv.f_high),
                          "start": int(iv.start), "stop": int(iv.stop), "regions": regions})
    return {
        "format_version": FORMAT_VERSION,
        "config": model.config.to_dict(),
        "column_names": list(model.column_names),
        "boundaries": _floats(model.boundaries),
        "training_risk": float(model.training_risk),
        "intervals": intervals,
        "metadata": dict(metadata or {}),
    }


def model_from_dict(d: dict) -> tuple[PlliModel, dict]:
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported model format_version {version!r}")
    cfg = FitConfig.from_dict(d["config"])
    intervals = []
    for iv in d["intervals"]:
        regions = []
        for r in iv["regions"]:
            m = r["model"]
            clip = tuple(m["clip"]) if m["clip"] is not None else None
            regions.append(Region(np.array(r["centroid"], dtype=float),
                                  LocalModel(m["kind"], m["coefficients"], m["intercept"], clip),
                                  int(r["size"]), np.array(r["feature_std"], dtype=float)))
        intervals.append(Interval(iv["f_low"], iv["f_high"], tuple(regions), iv["start"], iv["stop"]))
    model = PlliModel(np.array(d["boundaries"], dtype=float), tuple(intervals), cfg,
                      d["training_risk"], tuple(d["column_names"]))
    return model, d.get("metadata", {})


def dumps(model: PlliModel, metadata: Optional[dict] = None) -> str:
    return json.dumps(model_to_dict(model, metadata), indent=2, sort_keys=True, allow_nan=False) + "\n"


def loads(text: str) -> tuple[PlliModel, dict]:
    return model_from_dict(json.loads(text))


def save_model(model: PlliModel, path, metadata: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(model, metadata))


def load_model(path) -> tuple[PlliModel, dict]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
