"""Per-region local models: fitting, prediction and feature importances."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import LocalModel
from .exceptions import DimensionMismatch, EmptyRegion, NumericalFailure

# Cholesky pivots below PIVOT_TOL * max(1, max diag) count as singular.
PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class FitResult:
    model: LocalModel
    cost: float


def fit_constant(values, loss: str = "squared", dim: int = 0) -> FitResult:
    """Best constant under ``loss``: the mean (squared) or lower median (absolute).

    ``dim`` sets the length of the (all-zero) coefficient vector.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise EmptyRegion("cannot fit a model to an empty region")
    if loss == "squared":
        c = float(np.mean(v))
        cost = float(np.sum((v - c) ** 2))
    elif loss == "absolute":
        c = float(np.sort(v)[(v.size - 1) // 2])
        cost = float(np.sum(np.abs(v - c)))
    else:
        raise ValueError(f"unknown loss {loss!r}")
    return FitResult(LocalModel("constant", np.zeros(dim), c), cost)


def _cholesky(A, tol_scale, threshold):
    """Batched Cholesky of symmetric (B, p, p) matrices.

    Returns ``(L, ok)``; ``ok[b]`` is False when some pivot of batch b fell to
    ``threshold * tol_scale[b]`` or below.
    """
    B, p, _ = A.shape
    L = np.zeros_like(A)
    ok = np.ones(B, dtype=bool)
    for k in range(p):
        s = A[:, k, k].copy()
        for j in range(k):
            s -= L[:, k, j] * L[:, k, j]
        ok &= s > threshold * tol_scale
        lkk = np.sqrt(np.where(s > 0, s, np.nan))
        L[:, k, k] = lkk
        for i in range(k + 1, p):
            t = A[:, i, k].copy()
            for j in range(k):
                t -= L[:, i, j] * L[:, k, j]
            L[:, i, k] = t / lkk
    return L, ok


def _cho_solve(L, b):
    B, p = b.shape
    z = np.zeros_like(b)
    for i in range(p):
        t = b[:, i].copy()
        for j in range(i):
            t -= L[:, i, j] * z[:, j]
        z[:, i] = t / L[:, i, i]
    x = np.zeros_like(b)
    for i in range(p - 1, -1, -1):
        t = z[:, i].copy()
        for j in range(i + 1, p):
            t -= L[:, j, i] * x[:, j]
        x[:, i] = t / L[:, i, i]
    return x


def solve_normal(A, b, ridge_epsilon: float, force_ridge=None):
    """Solve batched normal equations ``A x = b`` with a ridge fallback.

    A batch element gets ``ridge_epsilon`` added to its diagonal when it is
    flagged in ``force_ridge`` or when plain Cholesky finds a tiny pivot.
    Elements that stay singular come back as NaN.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    B, p, _ = A.shape
    scale = np.maximum(1.0, np.max(np.abs(np.diagonal(A, axis1=1, axis2=2)), axis=1))
    if force_ridge is None:
        force_ridge = np.zeros(B, dtype=bool)
    with np.errstate(invalid="ignore", divide="ignore"):
        L, ok = _cholesky(A, scale, PIVOT_TOL)
        ok &= ~np.asarray(force_ridge, dtype=bool)
        x = np.full_like(b, np.nan)
        if ok.any():
            x[ok] = _cho_solve(L[ok], b[ok])
        bad = ~ok
        if bad.any():
            Ar = A[bad] + ridge_epsilon * np.eye(p)
            # without a ridge the fallback must meet the same pivot test
            Lr, ok_r = _cholesky(Ar, scale[bad], PIVOT_TOL if ridge_epsilon == 0 else 0.0)
            xr = _cho_solve(Lr, b[bad])
            xr[~ok_r] = np.nan
            x[bad] = xr
    return x


def fit_linear(X, y, ridge_epsilon: float = 1e-8, clip: Optional[tuple] = None) -> FitResult:
    """Least squares on ``[X | 1]`` via the normal equations."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    m, d = X.shape
    if m == 0:
        raise EmptyRegion("cannot fit a model to an empty region")
    if y.shape[0] != m:
        raise DimensionMismatch(f"{m} rows but {y.shape[0]} targets")
    Z = np.hstack([X, np.ones((m, 1))])
    A = Z.T @ Z
    rhs = Z.T @ y
    beta = solve_normal(A[None], rhs[None], ridge_epsilon, np.array([m < d + 1]))[0]
    if not np.all(np.isfinite(beta)):
        raise NumericalFailure("normal equations stayed singular after the ridge fallback")
    model = LocalModel("linear", beta[:d], float(beta[d]), clip)
    pred = Z @ beta
    if clip is not None:
        pred = np.clip(pred, clip[0], clip[1])
    return FitResult(model, float(np.sum((y - pred) ** 2)))


def predict_local(model: LocalModel, x) -> float:
    x = np.asarray(x, dtype=float).reshape(-1)
    if model.kind == "constant":
        v = model.intercept
    else:
        if x.shape[0] != model.d:
            raise DimensionMismatch(f"model expects {model.d} features, got {x.shape[0]}")
        v = float(model.coefficients @ x) + model.intercept
    if model.clip is not None:
        v = min(max(v, model.clip[0]), model.clip[1])
    return v


def predict_local_many(model: LocalModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if model.kind == "constant":
        out = np.full(X.shape[0], model.intercept)
    else:
        if X.shape[1] != model.d:
            raise DimensionMismatch(f"model expects {model.d} features, got {X.shape[1]}")
        out = X @ model.coefficients + model.intercept
    if model.clip is not None:
        out = np.clip(out, model.clip[0], model.clip[1])
    return out


def feature_importance(model: LocalModel, region_feature_stddev) -> np.ndarray:
    """``|b_j| * sigma_j`` per feature; all zeros for constant models."""
    s = np.asarray(region_feature_stddev, dtype=float).reshape(-1)
    if model.kind == "constant":
        return np.zeros(s.shape[0])
    if s.shape[0] != model.d:
        raise DimensionMismatch(f"model has {model.d} coefficients, got {s.shape[0]} stddevs")
    return np.abs(model.coefficients) * s
