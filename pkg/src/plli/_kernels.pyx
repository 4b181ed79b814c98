# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the routines in ``_kernels_py``.

Same signatures, same table conventions, same tie-breaking (smallest split
index wins).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, NAN, INFINITY

cnp.import_array()

SQUARED = 0
ABSOLUTE = 1

cdef double PIVOT_TOL = 1e-12


def compensated_cumsum(x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], k
    out = np.zeros(n + 1)
    cdef double[::1] o = out
    cdef double s = 0.0, comp = 0.0, v, t
    for k in range(n):
        v = xv[k]
        t = s + v
        if fabs(s) >= fabs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        o[k + 1] = s + comp
    return out


cdef inline double seg_cost(const double[::1] S, const double[::1] S2, const double[::1] y,
                            Py_ssize_t i, Py_ssize_t j, int loss) noexcept nogil:
    cdef Py_ssize_t m = j - i + 1, med
    cdef double s, c, ym
    if m == 1:
        return 0.0
    if loss == 0:
        s = S[j + 1] - S[i]
        c = (S2[j + 1] - S2[i]) - s * s / m
    else:
        med = i + (m - 1) // 2
        ym = y[med]
        c = (S[j + 1] - S[med + 1]) - (j - med) * ym + (med - i) * ym - (S[med] - S[i])
    return c if c > 0.0 else 0.0


def segment_costs_to(S, S2, y, Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t j, int loss):
    cdef const double[::1] Sv = np.ascontiguousarray(S, dtype=np.float64)
    cdef const double[::1] S2v = np.ascontiguousarray(S2, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty(hi - lo + 1)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(lo, hi + 1):
        o[i - lo] = seg_cost(Sv, S2v, yv, i, j, loss)
    return out


cdef tuple _init_tables(Py_ssize_t n, Py_ssize_t H):
    V = np.full((n + 1, H + 1), np.nan)
    Phi = np.full((n + 1, H + 1), -1, dtype=np.intp)
    V[1, 1:] = 0.0
    Phi[1, 1:] = 0
    return V, Phi


cdef void _pad(double[:, ::1] V, Py_ssize_t n, Py_ssize_t H) noexcept nogil:
    cdef Py_ssize_t q, p
    for q in range(2, H + 1):
        for p in range(2, q if q < n + 1 else n + 1):
            V[p, q] = V[p, p]


def dp_prefix(S, S2, y, Py_ssize_t H, int loss, Py_ssize_t stride):
    cdef const double[::1] Sv = np.ascontiguousarray(S, dtype=np.float64)
    cdef const double[::1] S2v = np.ascontiguousarray(S2, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = yv.shape[0]
    V_arr, Phi_arr = _init_tables(n, H)
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t[:, ::1] Phi = Phi_arr
    cdef Py_ssize_t p, q, c, best
    cdef double tot, bv
    with nogil:
        for p in range(2, n + 1):
            V[p, 1] = seg_cost(Sv, S2v, yv, 0, p - 1, loss)
            Phi[p, 1] = 0
        for q in range(2, H + 1):
            for p in range(q, n + 1):
                best = q - 1
                bv = INFINITY
                c = q - 1
                while c < p:
                    tot = V[c, q - 1] + seg_cost(Sv, S2v, yv, c, p - 1, loss)
                    if tot < bv:
                        bv = tot
                        best = c
                    c += stride
                V[p, q] = bv
                Phi[p, q] = best
        _pad(V, n, H)
    return V_arr, Phi_arr


cdef void _dc_row(double[:, ::1] V, Py_ssize_t[:, ::1] Phi, const double[::1] S,
                  const double[::1] S2, const double[::1] y, Py_ssize_t q, int loss,
                  Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t olo, Py_ssize_t ohi) noexcept nogil:
    cdef Py_ssize_t mid, a, b, c, best
    cdef double tot, bv
    while lo <= hi:
        mid = (lo + hi) // 2
        a = olo if olo > q - 1 else q - 1
        b = ohi if ohi < mid - 1 else mid - 1
        best = a
        bv = INFINITY
        for c in range(a, b + 1):
            tot = V[c, q - 1] + seg_cost(S, S2, y, c, mid - 1, loss)
            if tot < bv:
                bv = tot
                best = c
        V[mid, q] = bv
        Phi[mid, q] = best
        _dc_row(V, Phi, S, S2, y, q, loss, lo, mid - 1, olo, best)
        lo = mid + 1
        olo = best


def dc_prefix(S, S2, y, Py_ssize_t H, int loss):
    cdef const double[::1] Sv = np.ascontiguousarray(S, dtype=np.float64)
    cdef const double[::1] S2v = np.ascontiguousarray(S2, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = yv.shape[0]
    V_arr, Phi_arr = _init_tables(n, H)
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t[:, ::1] Phi = Phi_arr
    cdef Py_ssize_t p, q
    with nogil:
        for p in range(2, n + 1):
            V[p, 1] = seg_cost(Sv, S2v, yv, 0, p - 1, loss)
            Phi[p, 1] = 0
        for q in range(2, H + 1):
            if q > n:
                break
            _dc_row(V, Phi, Sv, S2v, yv, q, loss, q, n, q - 1, n - 1)
        _pad(V, n, H)
    return V_arr, Phi_arr


cdef bint _cholesky(double[:, ::1] A, double[:, ::1] L, Py_ssize_t p, double thresh) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double s, t, lkk
    cdef bint ok = True
    for k in range(p):
        s = A[k, k]
        for j in range(k):
            s -= L[k, j] * L[k, j]
        if not (s > thresh):
            ok = False
        lkk = sqrt(s) if s > 0.0 else NAN
        L[k, k] = lkk
        for i in range(k + 1, p):
            t = A[i, k]
            for j in range(k):
                t -= L[i, j] * L[k, j]
            L[i, k] = t / lkk
    return ok


cdef void _cho_solve(double[:, ::1] L, double[::1] b, double[::1] z, double[::1] x,
                     Py_ssize_t p) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double t
    for i in range(p):
        t = b[i]
        for j in range(i):
            t -= L[i, j] * z[j]
        z[i] = t / L[i, i]
    i = p - 1
    while i >= 0:
        t = z[i]
        for j in range(i + 1, p):
            t -= L[j, i] * x[j]
        x[i] = t / L[i, i]
        i -= 1


def linear_cost_matrix(X, y, double ridge_epsilon):
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], p = d + 1
    G_arr = np.full((n, n), np.inf)
    cdef double[:, ::1] G = G_arr
    cdef double[:, ::1] A = np.zeros((p, p))
    cdef double[:, ::1] Ar = np.zeros((p, p))
    cdef double[:, ::1] L = np.zeros((p, p))
    cdef double[::1] b = np.zeros(p)
    cdef double[::1] z = np.zeros(p)
    cdef double[::1] zz = np.zeros(p)
    cdef double[::1] beta = np.zeros(p)
    cdef Py_ssize_t i, j, r, c
    cdef double yj, scale, sse, t
    cdef bint ok
    with nogil:
        for i in range(n):
            for r in range(p):
                b[r] = 0.0
                for c in range(p):
                    A[r, c] = 0.0
            for j in range(i, n):
                for r in range(d):
                    z[r] = Xv[j, r]
                z[d] = 1.0
                yj = yv[j]
                for r in range(p):
                    for c in range(p):
                        A[r, c] += z[r] * z[c]
                    b[r] += z[r] * yj
                scale = 1.0
                for r in range(p):
                    if fabs(A[r, r]) > scale:
                        scale = fabs(A[r, r])
                ok = False
                if j - i + 1 >= p:
                    ok = _cholesky(A, L, p, PIVOT_TOL * scale)
                if not ok:
                    for r in range(p):
                        for c in range(p):
                            Ar[r, c] = A[r, c]
                        Ar[r, r] += ridge_epsilon
                    ok = _cholesky(Ar, L, p, PIVOT_TOL * scale if ridge_epsilon == 0.0 else 0.0)
                    if not ok:
                        G[i, j] = NAN
                        continue
                _cho_solve(L, b, zz, beta, p)
                sse = 0.0
                for r in range(i, j + 1):
                    t = yv[r] - beta[d]
                    for c in range(d):
                        t -= Xv[r, c] * beta[c]
                    sse += t * t
                if sse != sse:
                    G[i, j] = NAN
                else:
                    G[i, j] = sse if sse > 0.0 else 0.0
    return G_arr


def dp_dense(G, Py_ssize_t H, Py_ssize_t stride, bint full):
    cdef const double[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.float64)
    cdef Py_ssize_t n = Gv.shape[0]
    V_arr, Phi_arr = _init_tables(n, H)
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t[:, ::1] Phi = Phi_arr
    cdef Py_ssize_t p, q, c, best, plo
    cdef double tot, bv
    with nogil:
        for p in range(2, n + 1):
            if H == 1 and not full and p != n:
                continue
            V[p, 1] = Gv[0, p - 1]
            Phi[p, 1] = 0
        for q in range(2, H + 1):
            plo = q
            if not full and q == H:
                plo = n if n >= q else n + 1
            for p in range(plo, n + 1):
                best = q - 1
                bv = INFINITY
                c = q - 1
                while c < p:
                    tot = V[c, q - 1] + Gv[c, p - 1]
                    if tot < bv:
                        bv = tot
                        best = c
                    c += stride
                V[p, q] = bv
                Phi[p, q] = best
        if full:
            _pad(V, n, H)
    return V_arr, Phi_arr
