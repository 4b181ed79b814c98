"""Piecewise local-linear surrogate models built by dynamic programming."""

__version__ = "0.1.0"

from .cluster1d import Clustering1D, brute_force_1d, check_midpoint_property, cluster_1d
from .core import (
    Dataset,
    FitConfig,
    Interval,
    LocalModel,
    PlliModel,
    Region,
    SortedDataset,
    sort_by_target,
    validate_dataset,
)
from .dp import (
    ValueIndexTables,
    compute_value_index,
    fit_plli,
    predict,
    predict_many,
    reconstruct_partition,
)
from .kernels import BACKEND
from .kmeans import KmeansResult, kmeans, nearest_centroid
from .local_models import FitResult, feature_importance, fit_constant, fit_linear, predict_local
from .metrics import EvalReport, coverage, evaluate, fit_eq_plli, representatives
from .modelfile import load_model, save_model
from .segment_cost import CostRecord, PrefixOracle, build_prefix_oracle, segment_cost, segment_slice

__all__ = [
    "BACKEND",
    "Clustering1D",
    "CostRecord",
    "Dataset",
    "EvalReport",
    "FitConfig",
    "FitResult",
    "Interval",
    "KmeansResult",
    "LocalModel",
    "PlliModel",
    "PrefixOracle",
    "Region",
    "SortedDataset",
    "ValueIndexTables",
    "brute_force_1d",
    "build_prefix_oracle",
    "check_midpoint_property",
    "cluster_1d",
    "compute_value_index",
    "coverage",
    "evaluate",
    "feature_importance",
    "fit_constant",
    "fit_eq_plli",
    "fit_linear",
    "fit_plli",
    "kmeans",
    "load_model",
    "nearest_centroid",
    "predict",
    "predict_local",
    "predict_many",
    "reconstruct_partition",
    "representatives",
    "save_model",
    "segment_cost",
    "segment_slice",
    "sort_by_target",
    "validate_dataset",
]
