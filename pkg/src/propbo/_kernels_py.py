"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_kernels`` extension exactly; ``propbo.kernels``
picks one of the two at import time.
"""
import numpy as np


def sq_dists(A, B):
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    out = np.zeros((A.shape[0], B.shape[0]))
    # accumulate one coordinate at a time: O(na*nb) memory, fixed summation order
    for k in range(A.shape[1]):
        diff = A[:, k, None] - B[None, :, k]
        out += diff * diff
    return out


def rbf(A, B, beta):
    return np.exp(-beta * sq_dists(A, B))


def _normalize_rows(C):
    s = C.sum(axis=1, keepdims=True)
    nz = s[:, 0] > 0.0
    C[nz] /= s[nz]
    return C


def lp_iterate(M, C0, n_l, tau, eps):
    M = np.ascontiguousarray(M, dtype=np.float64)
    C = np.array(C0, dtype=np.float64, copy=True)
    M_u = M[n_l:]
    deltas = np.empty(tau)
    it = 0
    while it < tau:
        new_u = _normalize_rows(M_u @ C)
        # labeled rows are clamped, so only the unlabeled block can move
        delta = np.abs(new_u - C[n_l:]).max() if new_u.size else 0.0
        C[n_l:] = new_u
        deltas[it] = delta
        it += 1
        if delta < eps:
            break
    return C, it, deltas[:it]


def ls_iterate(S, C0, alpha, tau, eps):
    S = np.ascontiguousarray(S, dtype=np.float64)
    Y = np.asarray(C0, dtype=np.float64)
    base = (1.0 - alpha) * Y
    F = Y.copy()
    deltas = np.empty(tau)
    it = 0
    while it < tau:
        F_new = alpha * (S @ F) + base
        delta = np.abs(F_new - F).max()
        F = F_new
        deltas[it] = delta
        it += 1
        if delta < eps:
            break
    return F, it, deltas[:it]


def class1_value_grad(Q, X, C, beta, need_grad):
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    keep = C.sum(axis=1) > 0.0
    X = X[keep]
    C = C[keep]
    logw = -beta * sq_dists(Q, X)
    # shifting by the row max leaves the ratio unchanged and avoids 0/0 far from data
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    a0 = w @ C[:, 0]
    a1 = w @ C[:, 1]
    total = a0 + a1
    p = a1 / total
    if not need_grad:
        return p, None
    # d w_j / d q = -2 beta w_j (q - x_j)
    wq0 = w * C[None, :, 0]
    wq1 = w * C[None, :, 1]
    da0 = -2.0 * beta * (a0[:, None] * Q - wq0 @ X)
    da1 = -2.0 * beta * (a1[:, None] * Q - wq1 @ X)
    grad = (da1 * a0[:, None] - a1[:, None] * da0) / (total * total)[:, None]
    return p, grad
