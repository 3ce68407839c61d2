"""Max-plus (Bousch) operator on grid functions and calibrated sub-actions.

For a potential ``psi`` the operator is

    L_psi(u)(x) = max( sup_{a >= 1} (u + psi)(1/(a + x)),  (u + psi)(0) )

where the last term is the constant branch. Grid functions are sampled at
``x_i = i / n`` and read by linear interpolation.

Branches ``a = 1..A`` are evaluated directly. The remaining ones are handled
node by node: a node is settled once ``max (u + psi)`` over ``[0, 1/(A+1)]``
does not exceed its current value by more than ``tail_tol``. Unsettled nodes
get more branches, up to the point where ``1/A`` is at most the first knot
of ``psi``. Past that point the tail points ``1/(a + x)``, ``a > A``, lie in
an interval on which ``u + psi`` is convex, so their supremum is the
larger of the two end values, and both are already candidates. The result is
then exact up to interpolation.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels, threads
from .cf_core import K_alpha, K_alpha_safe
from .potentials import GridFunction, Potential

__all__ = [
    "GridFunction",
    "BouschOperator",
    "BouschResult",
    "ConvergenceError",
    "bousch_apply",
    "drift_q_estimate",
    "calibrated_subaction",
    "mane_residual",
    "revealed_potential",
    "grid_seminorm_estimate",
]


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int, last=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.last = last


class TailError(RuntimeError):
    """Tail of the branch supremum could not be certified within the branch cap."""


@dataclass
class ApplyStats:
    max_branch: int = 0
    extended_nodes: int = 0
    exact_tail_nodes: int = 0
    tail_gap: float = 0.0


class BouschOperator:
    """``u -> L_{psi - shift}(u)`` on a fixed grid, with precomputed branch data."""

    def __init__(
        self,
        psi: Potential,
        n_cells: int,
        shift: float = 0.0,
        branch_cutoff: int = 64,
        tail_tol: float = 1e-9,
        branch_cap: int = 1 << 16,
    ):
        if branch_cutoff < 2:
            raise ValueError("branch_cutoff must be at least 2")
        self.psi = psi
        self.n = int(n_cells)
        self.shift = float(shift)
        self.A = int(branch_cutoff)
        self.tail_tol = float(tail_tol)
        self.branch_cap = int(branch_cap)
        self.x = np.linspace(0.0, 1.0, self.n + 1)
        a = np.arange(1, self.A + 1, dtype=np.float64)
        y = 1.0 / (a[None, :] + self.x[:, None])
        self.idx, self.wt = self._locate(y)
        self.psi_vals = np.ascontiguousarray(psi(y) - self.shift)
        self.psi0 = float(psi(np.array([0.0]))[0]) - self.shift
        # prefix maxima of u + psi on [0, c] are taken over these points
        pk = np.asarray(psi.knots(), dtype=float)
        self.knots = np.unique(np.concatenate((self.x, pk[(pk >= 0) & (pk <= 1)])))
        self.psi_knots = psi(self.knots) - self.shift
        self.knot_convex = psi.knot_convex
        first = min(1.0 / self.n, float(np.min(pk[pk > 0])) if np.any(pk > 0) else 1.0)
        # from this branch on every tail point sits in the first convex piece
        self.A_exact = max(self.A, int(math.ceil(1.0 / first))) if self.knot_convex else math.inf
        self.psi_seminorm = psi.seminorm_bound
        self.stats = ApplyStats()

    def _locate(self, y: np.ndarray):
        s = y * self.n
        i = np.minimum(s.astype(np.int64), self.n - 1)
        return np.ascontiguousarray(i), np.ascontiguousarray(s - i)

    def _prefix_max(self, u: np.ndarray, c: float) -> float:
        """Upper bound of ``u + psi - shift`` on ``[0, c]``."""
        k = self.knots
        sel = k <= c
        g = np.interp(k[sel], self.x, u) + self.psi_knots[sel]
        gc = float(np.interp(c, self.x, u)) + float(self.psi(np.array([c]))[0]) - self.shift
        m = max(float(np.max(g)), gc)
        if not self.knot_convex:
            m = max(
                float(np.max(np.interp(k[sel], self.x, u))),
                float(np.interp(c, self.x, u)),
            ) + self.psi.interval_max(0.0, c) - self.shift
        return m

    def _base(self, u: np.ndarray):
        inf_val = float(u[0]) + self.psi0
        nt = threads()
        if nt <= 1 or self.n < 4096:
            return kernels.bousch_max(u, self.idx, self.wt, self.psi_vals, inf_val)
        bounds = np.linspace(0, self.n + 1, nt + 1).astype(int)
        with ThreadPoolExecutor(nt) as ex:
            parts = list(
                ex.map(
                    lambda lohi: kernels.bousch_max(
                        u,
                        self.idx[lohi[0] : lohi[1]],
                        self.wt[lohi[0] : lohi[1]],
                        self.psi_vals[lohi[0] : lohi[1]],
                        inf_val,
                    ),
                    zip(bounds[:-1], bounds[1:]),
                )
            )
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])

    def apply(self, u) -> np.ndarray:
        """One application on raw node values; returns new node values."""
        u = np.ascontiguousarray(u, dtype=np.float64)
        if not np.all(np.isfinite(u)):
            raise ValueError("non-finite values in grid function")
        vals, _ = self._base(u)
        vals = vals.copy()
        st = ApplyStats(max_branch=self.A)
        A = self.A
        M = self._prefix_max(u, 1.0 / (A + 1))
        fail = np.nonzero(vals < M - self.tail_tol)[0]
        if fail.size:
            st.extended_nodes = int(fail.size)
        while fail.size:
            if A >= self.A_exact:
                st.exact_tail_nodes += int(fail.size)
                break
            if A >= self.branch_cap:
                st.tail_gap = float(np.max(M - vals[fail]))
                raise TailError(
                    f"tail not certified at {A} branches (gap {st.tail_gap:.3g})"
                )
            A_next = min(2 * A, self.A_exact, self.branch_cap)
            vals[fail] = np.maximum(vals[fail], self._extra(u, fail, A + 1, A_next))
            A = A_next
            st.max_branch = max(st.max_branch, A)
            M = self._prefix_max(u, 1.0 / (A + 1))
            fail = fail[vals[fail] < M - self.tail_tol]
            if A >= self.A_exact:
                st.exact_tail_nodes += int(fail.size)
                break
        self.stats = st
        if not np.all(np.isfinite(vals)):
            raise ValueError("operator produced non-finite values")
        return vals

    def _extra(self, u: np.ndarray, nodes: np.ndarray, a_lo: int, a_hi: int) -> np.ndarray:
        """Max over branches ``a_lo..a_hi`` at the given nodes."""
        out = np.full(nodes.size, -np.inf)
        a = np.arange(a_lo, a_hi + 1, dtype=np.float64)
        rows = max(1, (1 << 22) // max(1, a.size))
        for s in range(0, nodes.size, rows):
            xs = self.x[nodes[s : s + rows]]
            y = 1.0 / (a[None, :] + xs[:, None])
            i, w = self._locate(y)
            g = u[i] * (1.0 - w) + u[i + 1] * w + self.psi(y) - self.shift
            out[s : s + rows] = np.max(g, axis=1)
        return out

    def __call__(self, u: GridFunction) -> GridFunction:
        return GridFunction(self.apply(u.values), u.alpha)


_OP_CACHE: dict = {}


def _operator(psi, n, shift, A, tail_tol) -> BouschOperator:
    key = (id(psi), n, shift, A, tail_tol)
    op = _OP_CACHE.get(key)
    if op is None or op.psi is not psi:
        if len(_OP_CACHE) > 8:
            _OP_CACHE.clear()
        op = BouschOperator(psi, n, shift, A, tail_tol)
        _OP_CACHE[key] = op
    return op


def bousch_apply(
    u: GridFunction, psi: Potential, branch_cutoff: int = 64, tail_tol: float = 1e-9
) -> GridFunction:
    return _operator(psi, u.n_cells, 0.0, branch_cutoff, tail_tol)(u)


# ---------------------------------------------------------------------------
# ergodic supremum from iterate drift


@dataclass
class DriftEstimate:
    q_low: float
    q_high: float
    q_low_step: float
    q_high_step: float
    n_iters: int
    n_cells: int
    width_bound: float

    @property
    def q_mid(self) -> float:
        return 0.5 * (self.q_low_step + self.q_high_step)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def drift_q_estimate(
    phi: Potential,
    n_iters: int = 200,
    grid: int = 4096,
    branch_cutoff: int = 64,
    tail_tol: float = 1e-9,
) -> DriftEstimate:
    """Sandwich the ergodic supremum using ``t_n = L_phi^n(0)``.

    ``(q_low, q_high)`` are the extremes of ``t_n / n``. The step estimates
    are the extremes of ``t_n - t_{n-1}``; for any ``u`` the supremum lies
    between ``min(L u - u)`` and ``max(L u - u)``.
    """
    if n_iters < 2:
        raise ValueError("n_iters must be at least 2")
    op = _operator(phi, grid, 0.0, branch_cutoff, tail_tol)
    t = np.zeros(grid + 1)
    prev = t
    for _ in range(n_iters):
        prev, t = t, op.apply(t)
        if not np.all(np.isfinite(t)):
            raise ConvergenceError("iterates diverged", math.inf, _)
    step = t - prev
    width = 2.0 * K_alpha_safe(phi.alpha) * phi.seminorm_bound / n_iters
    return DriftEstimate(
        float(np.min(t)) / n_iters,
        float(np.max(t)) / n_iters,
        float(np.min(step)),
        float(np.max(step)),
        n_iters,
        grid,
        width,
    )


# ---------------------------------------------------------------------------
# calibrated sub-actions


@dataclass
class BouschResult:
    u: GridFunction
    q_estimate: float
    residual: float
    iterations: int
    sup_norm_bound_check: bool
    seminorm_bound_check: bool
    sup_norm: float = 0.0
    seminorm_estimate: float = 0.0
    bound_safe: float = 0.0
    bound_stated: float = 0.0
    window: int = 0
    stabilization: float = 0.0
    max_branch: int = 0

    @property
    def u0(self) -> float:
        return float(self.u.values[0])

    def to_json(self) -> dict:
        return {
            "q_estimate": self.q_estimate,
            "residual": self.residual,
            "iterations": self.iterations,
            "u0": self.u0,
            "sup_norm": self.sup_norm,
            "seminorm_estimate": self.seminorm_estimate,
            "bound_safe": self.bound_safe,
            "bound_stated": self.bound_stated,
            "sup_norm_bound_check": self.sup_norm_bound_check,
            "seminorm_bound_check": self.seminorm_bound_check,
            "window": self.window,
            "stabilization": self.stabilization,
            "max_branch": self.max_branch,
            "n_cells": self.u.n_cells,
        }


def calibrated_subaction(
    phi: Potential,
    q: float,
    n_cells: int = 8192,
    window: int = 16,
    max_iters: int = 5000,
    tol: float = 1e-6,
    branch_cutoff: int = 64,
    tail_tol: float = 1e-9,
) -> BouschResult:
    """Approximate ``u = limsup_n L_{phi - q}^n(0)`` by windowed maxima.

    ``s_n = max(r_n, ..., r_{n+window})`` with ``r_n = L^n(0)``; iteration
    stops once successive ``s_n`` differ by at most ``tol`` in sup norm.
    """
    op = _operator(phi, n_cells, float(q), branch_cutoff, tail_tol)
    buf = [np.zeros(n_cells + 1)]
    for _ in range(window):
        buf.append(op.apply(buf[-1]))
    s_prev = np.max(np.stack(buf), axis=0)
    it = window
    change = math.inf
    max_branch = op.stats.max_branch
    while it < max_iters:
        buf.pop(0)
        buf.append(op.apply(buf[-1]))
        max_branch = max(max_branch, op.stats.max_branch)
        it += 1
        s = np.max(np.stack(buf), axis=0)
        change = float(np.max(np.abs(s - s_prev)))
        s_prev = s
        if change <= tol:
            break
    else:
        u = GridFunction(s_prev, phi.alpha)
        raise ConvergenceError(
            f"windowed maxima did not stabilise in {max_iters} iterations (last change {change:.3g})",
            mane_residual(u, phi, q, branch_cutoff, tail_tol),
            it,
            u,
        )
    u = GridFunction(s_prev, phi.alpha)
    residual = float(np.max(np.abs(u.values - op.apply(u.values))))
    bound = K_alpha_safe(phi.alpha) * phi.seminorm_bound
    sup = u.sup_norm()
    semi = grid_seminorm_estimate(u)
    return BouschResult(
        u=u,
        q_estimate=float(q),
        residual=residual,
        iterations=it,
        sup_norm_bound_check=sup <= bound + tol,
        seminorm_bound_check=semi <= bound + tol,
        sup_norm=sup,
        seminorm_estimate=semi,
        bound_safe=bound,
        bound_stated=K_alpha(phi.alpha) * phi.seminorm_bound,
        window=window,
        stabilization=change,
        max_branch=max_branch,
    )


def mane_residual(
    u: GridFunction, phi: Potential, q: float = 0.0, branch_cutoff: int = 64, tail_tol: float = 1e-9
) -> float:
    """``sup_i |u(x_i) - L_{phi - q}(u)(x_i)|``."""
    op = _operator(phi, u.n_cells, float(q), branch_cutoff, tail_tol)
    return float(np.max(np.abs(u.values - op.apply(u.values))))


def gauss_of_nodes(n: int) -> np.ndarray:
    """``G(i/n)`` for ``i = 0..n`` computed in integers: ``(n mod i) / i``."""
    i = np.arange(n + 1)
    out = np.zeros(n + 1)
    out[1:] = (n % i[1:]) / i[1:]
    return out


@dataclass
class RevealedPotential:
    values: GridFunction
    zero_locus: np.ndarray  # node indices
    max_value: float

    @property
    def zero_points(self) -> np.ndarray:
        return self.zero_locus / self.values.n_cells


def revealed_potential(
    phi: Potential, q: float, u: GridFunction, zero_tol: float = 1e-3
) -> RevealedPotential:
    """``phi - q + u - u o G`` at the grid nodes and its near-zero set."""
    x = u.nodes
    vals = phi(x) - q + u.values - u(gauss_of_nodes(u.n_cells))
    g = GridFunction(vals, u.alpha)
    locus = np.nonzero(vals >= -zero_tol)[0]
    return RevealedPotential(g, locus, float(np.max(vals)))


def grid_seminorm_estimate(
    f: GridFunction, exhaustive_limit: int = 1024, samples: int = 200_000, seed: int = 0
) -> float:
    """Lower estimate of the Hölder seminorm from node pairs.

    All pairs for ``n_cells <= exhaustive_limit``; above that every pair at
    lags up to the limit and at geometric lags, plus seeded random pairs.
    """
    v = f.values
    n = f.n_cells
    a = f.alpha
    if n <= exhaustive_limit:
        lags = np.arange(1, n + 1)
    else:
        geo = np.unique(np.geomspace(exhaustive_limit, n, 64).astype(int))
        lags = np.unique(np.concatenate((np.arange(1, exhaustive_limit + 1), geo)))
    best = 0.0
    for k in lags:
        d = float(np.max(np.abs(v[k:] - v[:-k])))
        best = max(best, d / (int(k) / n) ** a)
    if n > exhaustive_limit:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, n + 1, samples)
        j = rng.integers(0, n + 1, samples)
        keep = i != j
        i, j = i[keep], j[keep]
        r = np.abs(v[i] - v[j]) / (np.abs(i - j) / n) ** a
        best = max(best, float(np.max(r)))
    return best
