# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: pairwise RBF weights, propagation loops, inductive predictor.

Must stay signature-compatible with ``_kernels_py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


def sq_dists(A, B):
    cdef double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    out = np.zeros((na, nb))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double s, t
    for i in range(na):
        for j in range(nb):
            s = 0.0
            for k in range(d):
                t = a[i, k] - b[j, k]
                s += t * t
            o[i, j] = s
    return out


def rbf(A, B, double beta):
    out = sq_dists(A, B)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(o.shape[0]):
        for j in range(o.shape[1]):
            o[i, j] = exp(-beta * o[i, j])
    return out


cdef inline void _row_dot2(double[:, ::1] m, double[:, ::1] c, Py_ssize_t i, Py_ssize_t n,
                           double* out0, double* out1) noexcept nogil:
    # four independent partial sums per column break the add latency chain
    cdef Py_ssize_t j, n4 = n - n % 4
    cdef double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0
    cdef double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0
    for j in range(0, n4, 4):
        a0 += m[i, j] * c[j, 0]
        b0 += m[i, j] * c[j, 1]
        a1 += m[i, j + 1] * c[j + 1, 0]
        b1 += m[i, j + 1] * c[j + 1, 1]
        a2 += m[i, j + 2] * c[j + 2, 0]
        b2 += m[i, j + 2] * c[j + 2, 1]
        a3 += m[i, j + 3] * c[j + 3, 0]
        b3 += m[i, j + 3] * c[j + 3, 1]
    for j in range(n4, n):
        a0 += m[i, j] * c[j, 0]
        b0 += m[i, j] * c[j, 1]
    out0[0] = (a0 + a1) + (a2 + a3)
    out1[0] = (b0 + b1) + (b2 + b3)


def lp_iterate(M, C0, Py_ssize_t n_l, Py_ssize_t tau, double eps):
    cdef double[:, ::1] m = np.ascontiguousarray(M, dtype=np.float64)
    C = np.array(C0, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] c = C
    cdef Py_ssize_t n = m.shape[0]
    buf = np.empty((n, 2))
    cdef double[:, ::1] nb = buf
    deltas = np.empty(tau)
    cdef double[::1] dl = deltas
    cdef Py_ssize_t it = 0, i, j
    cdef double s0, s1, tot, delta, diff
    while it < tau:
        for i in range(n_l, n):
            _row_dot2(m, c, i, n, &s0, &s1)
            tot = s0 + s1
            if tot > 0.0:
                s0 = s0 / tot
                s1 = s1 / tot
            nb[i, 0] = s0
            nb[i, 1] = s1
        delta = 0.0
        for i in range(n_l, n):
            diff = fabs(nb[i, 0] - c[i, 0])
            if diff > delta:
                delta = diff
            diff = fabs(nb[i, 1] - c[i, 1])
            if diff > delta:
                delta = diff
            c[i, 0] = nb[i, 0]
            c[i, 1] = nb[i, 1]
        dl[it] = delta
        it += 1
        if delta < eps:
            break
    return C, it, deltas[:it]


def ls_iterate(S, C0, double alpha, Py_ssize_t tau, double eps):
    cdef double[:, ::1] s = np.ascontiguousarray(S, dtype=np.float64)
    cdef double[:, ::1] y = np.ascontiguousarray(C0, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    F = np.array(y, copy=True)
    cdef double[:, ::1] f = F
    buf = np.empty((n, 2))
    cdef double[:, ::1] nb = buf
    deltas = np.empty(tau)
    cdef double[::1] dl = deltas
    cdef double beta_ = 1.0 - alpha
    cdef Py_ssize_t it = 0, i, j
    cdef double s0, s1, delta, diff
    while it < tau:
        for i in range(n):
            _row_dot2(s, f, i, n, &s0, &s1)
            nb[i, 0] = alpha * s0 + beta_ * y[i, 0]
            nb[i, 1] = alpha * s1 + beta_ * y[i, 1]
        delta = 0.0
        for i in range(n):
            diff = fabs(nb[i, 0] - f[i, 0])
            if diff > delta:
                delta = diff
            diff = fabs(nb[i, 1] - f[i, 1])
            if diff > delta:
                delta = diff
            f[i, 0] = nb[i, 0]
            f[i, 1] = nb[i, 1]
        dl[it] = delta
        it += 1
        if delta < eps:
            break
    return F, it, deltas[:it]


def class1_value_grad(Q, X, C, double beta, bint need_grad):
    Carr = np.ascontiguousarray(C, dtype=np.float64)
    keep = Carr.sum(axis=1) > 0.0
    cdef double[:, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef double[:, ::1] x = np.ascontiguousarray(np.asarray(X, dtype=np.float64)[keep])
    cdef double[:, ::1] c = np.ascontiguousarray(Carr[keep])
    cdef Py_ssize_t nq = q.shape[0], n = x.shape[0], d = q.shape[1]
    p = np.empty(nq)
    cdef double[::1] pv = p
    grad = np.zeros((nq, d)) if need_grad else None
    cdef double[:, ::1] g
    if need_grad:
        g = grad
    logw_buf = np.empty(n)
    cdef double[::1] lw = logw_buf
    da0_buf = np.empty(d)
    da1_buf = np.empty(d)
    cdef double[::1] da0 = da0_buf
    cdef double[::1] da1 = da1_buf
    cdef Py_ssize_t i, j, k
    cdef double s, t, mx, w, a0, a1, tot
    for i in range(nq):
        mx = -1e308
        for j in range(n):
            s = 0.0
            for k in range(d):
                t = q[i, k] - x[j, k]
                s += t * t
            lw[j] = -beta * s
            if lw[j] > mx:
                mx = lw[j]
        a0 = 0.0
        a1 = 0.0
        for k in range(d):
            da0[k] = 0.0
            da1[k] = 0.0
        for j in range(n):
            w = exp(lw[j] - mx)
            a0 += w * c[j, 0]
            a1 += w * c[j, 1]
            if need_grad:
                for k in range(d):
                    t = -2.0 * beta * w * (q[i, k] - x[j, k])
                    da0[k] += t * c[j, 0]
                    da1[k] += t * c[j, 1]
        tot = a0 + a1
        pv[i] = a1 / tot
        if need_grad:
            for k in range(d):
                g[i, k] = (da1[k] * a0 - a1 * da0[k]) / (tot * tot)
    return p, grad
