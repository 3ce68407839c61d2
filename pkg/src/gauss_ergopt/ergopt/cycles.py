"""Upper bounds for the restricted supremum from a maximum mean cycle.

The graph has a node for every word in ``{1..m}^k`` and an edge ``w -> w'``
whenever ``w'`` is ``w`` shifted by one letter. The edge labelled by the
``(k+1)``-word ``v`` carries an upper bound for ``phi`` on the cylinder of
``v``. Every orbit in ``E_m`` follows a path, so the maximum cycle mean bounds
every Birkhoff average from above.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._backend import kernels
from ..cf_core import DomainError
from ..potentials import Potential

DEFAULT_BUDGET = 4_000_000  # edges


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial_depth: int, partial_bound: float | None = None):
        super().__init__(message)
        self.partial_depth = partial_depth
        self.partial_bound = partial_bound


@dataclass(frozen=True)
class CycleBound:
    m: int
    depth: int
    value: float  # certified upper bound (Collatz-Wielandt)
    cycle_mean: float  # mean of the cycle Howard's policy ends on
    iterations: int
    n_nodes: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def cylinder_endpoints(words: np.ndarray):
    """Float ``(lo, hi)`` of the cylinder of each row of ``words``."""
    words = np.asarray(words, dtype=float)
    cnt, n = words.shape
    p_prev, p = np.ones(cnt), np.zeros(cnt)
    q_prev, q = np.zeros(cnt), np.ones(cnt)
    for k in range(n):
        a = words[:, k]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    e0 = p / q
    e1 = (p + p_prev) / (q + q_prev)
    return np.minimum(e0, e1), np.maximum(e0, e1)


def cylinder_max(phi: Potential, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Upper bound for ``phi`` on each ``[lo, hi]``.

    Exact up to rounding when ``phi`` is convex between its knots; otherwise
    the midpoint value plus the Hölder slack.
    """
    if phi.knot_convex:
        best = np.maximum(phi(lo), phi(hi))
        for kn in phi.knots():
            inside = (lo < kn) & (kn < hi)
            if inside.any():
                best = np.where(inside, np.maximum(best, float(phi(np.array([kn]))[0])), best)
        return best + 1e-13
    mid = 0.5 * (lo + hi)
    return phi(mid) + phi.seminorm_bound * (0.5 * (hi - lo)) ** phi.alpha + 1e-13


def debruijn(m: int, k: int):
    """Successor table of the shift graph on ``{1..m}^k``; node index is base-m value."""
    n = m**k
    v = np.arange(n, dtype=np.int64)
    succ = (v[:, None] % (m ** (k - 1))) * m + np.arange(m, dtype=np.int64)[None, :]
    return succ


def _edge_words(m: int, k: int) -> np.ndarray:
    """Row ``v*m + j`` is the (k+1)-word of edge ``j`` out of node ``v``."""
    grids = np.indices((m,) * (k + 1)).reshape(k + 1, -1).T
    return grids + 1


def _policy_values(weights, succ, pol):
    """Cycle mean ``eta`` and bias ``x`` of the functional graph ``v -> succ[v, pol[v]]``."""
    n = succ.shape[0]
    nxt = succ[np.arange(n), pol]
    w = weights[np.arange(n), pol]
    eta = np.full(n, np.nan)
    x = np.full(n, np.nan)
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on stack, 2 done
    for s in range(n):
        if state[s]:
            continue
        path = []
        v = s
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = nxt[v]
        visited = path + [v]
        if state[v] == 1:
            # new cycle starting at v
            i = path.index(v)
            cyc = path[i:]
            mean = float(np.mean(w[cyc]))
            eta[cyc] = mean
            x[v] = 0.0
            for u in reversed(cyc[1:]):
                x[u] = w[u] - mean + x[nxt[u]]
            path = path[:i]
        for u in reversed(path):
            eta[u] = eta[nxt[u]]
            x[u] = w[u] - eta[u] + x[nxt[u]]
        state[np.asarray(visited, dtype=np.int64)] = 2
    return eta, x


def howard(weights: np.ndarray, succ: np.ndarray, max_iter: int = 10_000, tol: float = 1e-12):
    """Maximum cycle mean by policy iteration.

    Returns ``(lam, x, iterations)``. ``lam`` is the largest cycle mean of the
    final policy; with bias ``x`` the bound ``max(w + x[succ] - x)`` is
    always a valid upper bound on the maximum cycle mean.
    """
    n = succ.shape[0]
    pol = np.argmax(weights, axis=1)
    for it in range(1, max_iter + 1):
        eta, x = _policy_values(weights, succ, pol)
        eta_s = eta[succ]
        best_eta = eta_s.max(axis=1)
        up = best_eta > eta + tol
        if up.any():
            pol = np.where(up, np.argmax(eta_s, axis=1), pol)
            continue
        cand = np.where(eta_s >= eta[:, None] - tol, weights + x[succ], -np.inf)
        j = np.argmax(cand, axis=1)
        gain = cand[np.arange(n), j] - eta - x
        better = gain > tol * (1.0 + np.abs(x))
        if not better.any():
            return float(eta.max()), x, it
        pol = np.where(better, j, pol)
    return float(eta.max()), x, max_iter


def collatz_wielandt(weights: np.ndarray, succ: np.ndarray, x: np.ndarray) -> float:
    y, _ = kernels.max_plus_matvec(weights, succ, x)
    return float(np.max(y - x))


def karp(weights: np.ndarray, succ: np.ndarray) -> float:
    """Karp's maximum cycle mean; quadratic memory, for small strongly connected graphs."""
    n, d = succ.shape
    D = np.full((n + 1, n), -np.inf)
    D[0, 0] = 0.0
    src = np.repeat(np.arange(n), d)
    dst = succ.ravel()
    w = weights.ravel()
    for k in range(1, n + 1):
        cand = D[k - 1, src] + w
        np.maximum.at(D[k], dst, cand)
    best = -np.inf
    for v in range(n):
        if not np.isfinite(D[n, v]):
            continue
        ks = np.arange(n)
        fin = np.isfinite(D[:n, v])
        vals = (D[n, v] - D[:n, v][fin]) / (n - ks[fin])
        best = max(best, float(vals.min()))
    return best


def restricted_sup_cycle_bound(
    phi: Potential, m: int, depth: int, budget: int = DEFAULT_BUDGET
) -> CycleBound:
    """Certified upper bound for the supremum over invariant measures on ``E_m``."""
    if m < 1 or depth < 1:
        raise DomainError("m and depth must be >= 1")
    if m ** (depth + 1) > budget:
        k = 0
        while m ** (k + 2) <= budget:
            k += 1
        raise BudgetExceeded(f"m^(k+1) = {m ** (depth + 1)} edges exceeds budget {budget}", k)
    succ = debruijn(m, depth)
    lo, hi = cylinder_endpoints(_edge_words(m, depth))
    weights = cylinder_max(phi, lo, hi).reshape(m**depth, m)
    lam, x, it = howard(weights, succ)
    bound = collatz_wielandt(weights, succ, x)
    return CycleBound(m, depth, max(bound, lam), lam, it, m**depth)


def deepest_cycle_bound(phi: Potential, m: int, budget: int = DEFAULT_BUDGET, max_depth: int = 12) -> CycleBound:
    """Cycle bound at the largest depth whose edge count fits ``budget``."""
    k = 1
    while k < max_depth and m ** (k + 2) <= budget:
        k += 1
    return restricted_sup_cycle_bound(phi, m, k, budget)


__all__ = [
    "BudgetExceeded",
    "CycleBound",
    "cylinder_endpoints",
    "cylinder_max",
    "debruijn",
    "howard",
    "karp",
    "collatz_wielandt",
    "restricted_sup_cycle_bound",
    "deepest_cycle_bound",
]
