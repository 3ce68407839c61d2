# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops; see ``_fallback`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def lyndon_words(int m, int max_len):
    cdef Py_ssize_t cap = 1024, count = 0, k, j, length
    cdef cnp.int64_t[:, ::1] out = np.zeros((cap, max_len), dtype=np.int64)
    cdef cnp.int64_t[::1] lens = np.zeros(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] w = np.zeros(max_len, dtype=np.int64)
    if m < 1 or max_len < 1:
        return np.zeros((0, max_len), dtype=np.int64), np.zeros(0, dtype=np.int64)
    w[0] = 1
    length = 1
    while length > 0:
        if count == cap:
            cap *= 2
            grown = np.zeros((cap, max_len), dtype=np.int64)
            grown[:count] = np.asarray(out)
            out = grown
            grown_l = np.zeros(cap, dtype=np.int64)
            grown_l[:count] = np.asarray(lens)
            lens = grown_l
        for j in range(length):
            out[count, j] = w[j]
        lens[count] = length
        count += 1
        k = length
        for j in range(k, max_len):
            w[j] = w[j - k]
        length = max_len
        while length > 0 and w[length - 1] == m:
            length -= 1
        if length > 0:
            w[length - 1] += 1
    return np.asarray(out)[:count].copy(), np.asarray(lens)[:count].copy()


def periodic_orbit_points(words):
    cdef const cnp.int64_t[:, ::1] W = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t cnt = W.shape[0], n = W.shape[1], r, j, k
    cdef double p, pp, q, qp, t, a, b
    res = np.empty((cnt, n), dtype=np.float64)
    cdef double[:, ::1] out = res
    with nogil:
        for r in range(cnt):
            for j in range(n):
                pp = 1.0
                p = 0.0
                qp = 0.0
                q = 1.0
                for k in range(n):
                    a = <double> W[r, (j + k) % n]
                    t = a * p + pp
                    pp = p
                    p = t
                    t = a * q + qp
                    qp = q
                    q = t
                b = q - pp
                out[r, j] = 2.0 * p / (b + sqrt(b * b + 4.0 * qp * p))
    return res


def bousch_max(u, idx, wt, psi, double inf_val):
    cdef const double[::1] U = np.ascontiguousarray(u, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] I = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const double[:, ::1] Wt = np.ascontiguousarray(wt, dtype=np.float64)
    cdef const double[:, ::1] P = np.ascontiguousarray(psi, dtype=np.float64)
    cdef Py_ssize_t n = I.shape[0], A = I.shape[1], i, k, kb
    cdef double best, v, w
    cdef cnp.int64_t ii
    vals = np.empty(n, dtype=np.float64)
    arg = np.empty(n, dtype=np.int64)
    cdef double[::1] V = vals
    cdef cnp.int64_t[::1] G = arg
    with nogil:
        for i in range(n):
            kb = 0
            ii = I[i, 0]
            w = Wt[i, 0]
            best = U[ii] * (1.0 - w) + U[ii + 1] * w + P[i, 0]
            for k in range(1, A):
                ii = I[i, k]
                w = Wt[i, k]
                v = U[ii] * (1.0 - w) + U[ii + 1] * w + P[i, k]
                if v > best:
                    best = v
                    kb = k
            if inf_val > best:
                best = inf_val
                kb = A
            V[i] = best
            G[i] = kb
    return vals, arg


def max_plus_matvec(weights, succ, x):
    cdef const double[:, ::1] Wm = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] S = np.ascontiguousarray(succ, dtype=np.int64)
    cdef const double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = Wm.shape[0], d = Wm.shape[1], v, j, jb
    cdef double best, c
    y = np.empty(n, dtype=np.float64)
    arg = np.empty(n, dtype=np.int64)
    cdef double[::1] Y = y
    cdef cnp.int64_t[::1] G = arg
    with nogil:
        for v in range(n):
            jb = 0
            best = Wm[v, 0] + X[S[v, 0]]
            for j in range(1, d):
                c = Wm[v, j] + X[S[v, j]]
                if c > best:
                    best = c
                    jb = j
            Y[v] = best
            G[v] = jb
    return y, arg
