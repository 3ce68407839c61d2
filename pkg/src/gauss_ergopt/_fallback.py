"""Pure Python / numpy versions of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module.
"""
from __future__ import annotations

import numpy as np


def lyndon_words(m: int, max_len: int):
    """All Lyndon words over ``{1..m}`` of length ``<= max_len``, lexicographic.

    Returns ``(words, lengths)``; ``words`` is zero-padded to ``max_len`` columns.
    """
    out = []
    lens = []
    # Duval's successor: repeat periodically to full length, drop trailing
    # maximal letters, increment the last one
    w = [1]
    while w:
        out.append(w + [0] * (max_len - len(w)))
        lens.append(len(w))
        k = len(w)
        w = [w[j % k] for j in range(max_len)]
        while w and w[-1] == m:
            w.pop()
        if w:
            w[-1] += 1
    if not out:
        return np.zeros((0, max_len), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.array(out, dtype=np.int64), np.array(lens, dtype=np.int64)


def periodic_orbit_points(words: np.ndarray) -> np.ndarray:
    """``out[r, j] = [overline(w_j, ..., w_{n-1}, w_0, ..., w_{j-1})]`` for each row ``w``."""
    words = np.asarray(words, dtype=np.float64)
    cnt, n = words.shape
    out = np.empty((cnt, n))
    for j in range(n):
        rot = np.roll(words, -j, axis=1)
        p_prev, p = np.ones(cnt), np.zeros(cnt)
        q_prev, q = np.zeros(cnt), np.ones(cnt)
        for k in range(n):
            a = rot[:, k]
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
        # root of q_{n-1} x^2 + (q_n - p_{n-1}) x - p_n, written without cancellation
        b = q - p_prev
        out[:, j] = 2.0 * p / (b + np.sqrt(b * b + 4.0 * q_prev * p))
    return out


def bousch_max(u, idx, wt, psi, inf_val: float):
    """Per-node max over branch candidates and the constant branch.

    Candidate ``k`` at node ``i`` is ``u[idx]*(1-wt) + u[idx+1]*wt + psi``;
    ``inf_val`` is the value of the constant branch, listed last. The first
    maximal candidate wins. Returns ``(values, argmax)`` with ``argmax = A``
    for the constant branch.
    """
    u = np.asarray(u, dtype=np.float64)
    cand = u[idx] * (1.0 - wt) + u[idx + 1] * wt + psi
    k = np.argmax(cand, axis=1)
    best = cand[np.arange(cand.shape[0]), k]
    use_inf = inf_val > best
    vals = np.where(use_inf, inf_val, best)
    arg = np.where(use_inf, idx.shape[1], k)
    return vals, arg.astype(np.int64)


def max_plus_matvec(weights: np.ndarray, succ: np.ndarray, x: np.ndarray):
    """``y[v] = max_j weights[v, j] + x[succ[v, j]]`` with argmax."""
    cand = weights + x[succ]
    k = np.argmax(cand, axis=1)
    return cand[np.arange(cand.shape[0]), k], k.astype(np.int64)
