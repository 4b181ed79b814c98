"""Pure numpy implementation of the hot loops.

Mirrors ``_kernels.pyx`` function for function; ``plli.kernels`` picks one of
the two at import time.

Table conventions shared by every DP routine: ``V`` and ``Phi`` have shape
``(n + 1, H + 1)`` and are indexed by 1-based point count ``p`` and interval
count ``q``.  ``Phi[p, q]`` is the number of points in the first ``q - 1``
intervals, so interval ``q`` covers sorted positions ``Phi[p, q] .. p - 1``
(0-based).  Row 0 and column 0 are unused (NaN / -1).
"""
from __future__ import annotations

import numpy as np

from .local_models import solve_normal

SQUARED = 0
ABSOLUTE = 1


def compensated_cumsum(x) -> np.ndarray:
    """Prefix sums with Neumaier compensation; ``out[0] = 0``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[0] + 1)
    s = 0.0
    comp = 0.0
    for k, v in enumerate(x.tolist()):
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out[k + 1] = s + comp
    return out


def segment_costs_to(S, S2, y, lo, hi, j, loss):
    """Constant-model costs of segments ``[i, j]`` for ``i`` in ``lo..hi``."""
    i = np.arange(lo, hi + 1)
    m = j - i + 1
    if loss == SQUARED:
        s = S[j + 1] - S[i]
        c = (S2[j + 1] - S2[i]) - s * s / m
    else:
        med = i + (m - 1) // 2
        ym = y[med]
        c = (S[j + 1] - S[med + 1]) - (j - med) * ym + (med - i) * ym - (S[med] - S[i])
    return np.where(m == 1, 0.0, np.maximum(c, 0.0))


def _init_tables(n, H):
    V = np.full((n + 1, H + 1), np.nan)
    Phi = np.full((n + 1, H + 1), -1, dtype=np.intp)
    V[1, 1:] = 0.0
    Phi[1, 1:] = 0
    return V, Phi


def _pad(V, Phi, n, H):
    # fewer points than intervals: the extra intervals stay empty
    for q in range(2, H + 1):
        for p in range(2, min(q, n + 1)):
            V[p, q] = V[p, p]


def dp_prefix(S, S2, y, H, loss, stride):
    """Exact (``stride == 1``) or strided DP for W=1 constant models."""
    S = np.asarray(S, dtype=float)
    S2 = np.asarray(S2, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    V, Phi = _init_tables(n, H)
    for p in range(2, n + 1):
        V[p, 1] = segment_costs_to(S, S2, y, 0, 0, p - 1, loss)[0]
        Phi[p, 1] = 0
    for q in range(2, H + 1):
        for p in range(q, n + 1):
            cand = np.arange(q - 1, p, stride)
            tot = V[cand, q - 1] + segment_costs_to(S, S2, y, q - 1, p - 1, p - 1, loss)[cand - (q - 1)]
            k = int(np.argmin(tot))
            V[p, q] = tot[k]
            Phi[p, q] = cand[k]
    _pad(V, Phi, n, H)
    return V, Phi


def dc_prefix(S, S2, y, H, loss):
    """Exact DP for W=1 constant models by divide and conquer on the argmin.

    Relies on the split point being monotone in ``p``, which holds for the
    squared and absolute segment costs of sorted values.
    """
    S = np.asarray(S, dtype=float)
    S2 = np.asarray(S2, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    V, Phi = _init_tables(n, H)
    for p in range(2, n + 1):
        V[p, 1] = segment_costs_to(S, S2, y, 0, 0, p - 1, loss)[0]
        Phi[p, 1] = 0
    for q in range(2, H + 1):
        if q > n:
            break
        stack = [(q, n, q - 1, n - 1)]
        while stack:
            lo, hi, olo, ohi = stack.pop()
            if lo > hi:
                continue
            mid = (lo + hi) // 2
            a = max(olo, q - 1)
            b = min(ohi, mid - 1)
            cand = np.arange(a, b + 1)
            tot = V[cand, q - 1] + segment_costs_to(S, S2, y, a, b, mid - 1, loss)
            k = int(np.argmin(tot))
            V[mid, q] = tot[k]
            Phi[mid, q] = cand[k]
            stack.append((lo, mid - 1, olo, cand[k]))
            stack.append((mid + 1, hi, cand[k], ohi))
    _pad(V, Phi, n, H)
    return V, Phi


def linear_cost_matrix(X, y, ridge_epsilon):
    """``G[i, j]``: least-squares cost of one linear model on rows ``i..j``.

    Costs are summed from explicit residuals; the closed-form
    ``y'y - b'beta`` loses too much precision on near-collinear segments.

    Entries below the diagonal are ``inf``; entries whose normal equations
    stay singular are NaN.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    p = d + 1
    Z = np.hstack([X, np.ones((n, 1))])
    G = np.full((n, n), np.inf)
    for i in range(n):
        Zs = Z[i:]
        ys = y[i:]
        A = np.cumsum(Zs[:, :, None] * Zs[:, None, :], axis=0)
        b = np.cumsum(Zs * ys[:, None], axis=0)
        m = np.arange(1, n - i + 1)
        beta = solve_normal(A, b, ridge_epsilon, m < p)
        R = ys[None, :] - beta @ Zs.T
        R = np.tril(R * R)
        G[i, i:] = R.sum(axis=1)
    return G


def dp_dense(G, H, stride, full):
    """DP over a precomputed cost matrix ``G`` (0-based inclusive segments).

    With ``full`` false the last row ``q = H`` is filled only at ``p = n``,
    so ``G`` only needs the entries that cell and the rows below it touch.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    V, Phi = _init_tables(n, H)
    for p in range(2, n + 1):
        if H == 1 and not full and p != n:
            continue
        V[p, 1] = G[0, p - 1]
        Phi[p, 1] = 0
    for q in range(2, H + 1):
        ps = range(q, n + 1) if (full or q < H) else ([n] if n >= q else [])
        for p in ps:
            cand = np.arange(q - 1, p, stride)
            tot = V[cand, q - 1] + G[cand, p - 1]
            k = int(np.argmin(tot))
            V[p, q] = tot[k]
            Phi[p, q] = cand[k]
    if full:
        _pad(V, Phi, n, H)
    return V, Phi
