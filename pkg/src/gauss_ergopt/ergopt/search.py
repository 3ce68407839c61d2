"""Lower bounds from periodic orbits, FCF sweeps, and the global supremum estimate."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._backend import kernels
from ..cf_core import DomainError, Word, words_array
from ..measures import fcf_measure, integrate, periodic_orbit_points
from ..potentials import NotExact, Potential
from ..surd import QuadSurd

# float candidates within this relative distance of the best are re-ranked exactly
EXACT_WINDOW = 1e-9
EXACT_CAP = 256


@dataclass(frozen=True)
class OrbitSearchResult:
    m: int
    max_period: int
    best_value: float
    best_word: Word
    exact: bool = False
    exact_value: object = None  # Fraction or QuadSurd when exact
    upper_bound: float | None = None
    n_orbits: int = 0

    def __post_init__(self):
        if self.upper_bound is not None and self.best_value > self.upper_bound + 1e-12:
            raise AssertionError(f"lower bound {self.best_value} above upper bound {self.upper_bound}")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "max_period": self.max_period,
            "best_value": self.best_value,
            "best_word": list(self.best_word),
            "exact": self.exact,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
            "upper_bound": self.upper_bound,
            "n_orbits": self.n_orbits,
        }


@functools.lru_cache(maxsize=8)
def _necklaces(m: int, max_period: int):
    """Lyndon words over {1..m} of length <= P, lexicographic, with their orbit points."""
    words, lens = kernels.lyndon_words(m, max_period)
    groups = []
    for n in range(1, max_period + 1):
        sel = np.flatnonzero(lens == n)
        if sel.size:
            pts = kernels.periodic_orbit_points(words[sel, :n])
            groups.append((n, sel, pts))
    maxdig = words.max(axis=1) if len(words) else np.zeros(0, dtype=np.int64)
    return words, lens, maxdig, groups


def _word_at(words, lens, i) -> Word:
    return tuple(int(a) for a in words[i, : lens[i]])


def exact_orbit_mean(phi: Potential, w) -> object:
    """Exact Birkhoff mean of ``phi`` along the periodic orbit of ``w``."""
    pts = periodic_orbit_points(w)
    total = Fraction(0)
    for p in pts:
        total = phi.exact(p) + total
    return total / len(pts)


def _cmp(a, b) -> int:
    if isinstance(a, QuadSurd):
        return a.compare(b)
    if isinstance(b, QuadSurd):
        return -b.compare(a)
    return (a > b) - (a < b)


def _exact_best(phi: Potential, cands: list[Word]):
    """Exact maximum over ``cands`` (already lexicographic); first maximum wins."""
    best_w, best_v = None, None
    for w in cands:
        v = exact_orbit_mean(phi, w)
        if best_v is None or _cmp(v, best_v) > 0:
            best_w, best_v = w, v
    return best_w, best_v


def orbit_sweep(phi: Potential, m_max: int, max_period: int, exact: bool | None = None) -> list[OrbitSearchResult]:
    """:func:`restricted_sup_orbits` for every ``m = 1..m_max`` from one enumeration."""
    if m_max < 1 or max_period < 1:
        raise DomainError("m and the period bound must be >= 1")
    words, lens, maxdig, groups = _necklaces(m_max, max_period)
    means = np.empty(len(words))
    for n, sel, pts in groups:
        means[sel] = phi(pts.ravel()).reshape(pts.shape).mean(axis=1)
    if exact is None:
        exact = phi.is_exact
    out = []
    for m in range(1, m_max + 1):
        idx = np.flatnonzero(maxdig <= m)
        vals = means[idx]
        k = int(np.argmax(vals))
        best = float(vals[k])
        word = _word_at(words, lens, idx[k])
        ev = None
        is_exact = False
        if exact:
            near = idx[vals >= best - EXACT_WINDOW * max(1.0, abs(best))][:EXACT_CAP]
            try:
                word, ev = _exact_best(phi, [_word_at(words, lens, i) for i in near])
                best = float(ev)
                is_exact = True
            except NotExact:
                pass
        out.append(OrbitSearchResult(m, max_period, best, word, is_exact, ev, None, int(idx.size)))
    return out


def restricted_sup_orbits(phi: Potential, m: int, max_period: int, exact: bool | None = None) -> OrbitSearchResult:
    """Best Birkhoff mean over periodic orbits in ``E_m`` with period ``<= max_period``.

    A lower bound for the supremum over invariant measures supported on ``E_m``.
    Ties go to the lexicographically smallest primitive word.
    """
    return orbit_sweep(phi, m, max_period, exact)[-1]


# ---------------------------------------------------------------------------
# FCF measures


@dataclass(frozen=True)
class RankedMeasure:
    label: str
    word: Word | None  # None for delta_0
    value: float
    exact_value: object = None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "word": None if self.word is None else list(self.word),
            "value": self.value,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
        }


def _label(w) -> str:
    return "delta0" if w is None else "mu" + str(tuple(w)).replace(" ", "")


def fcf_values(phi: Potential, max_digit: int, max_len: int):
    """Float ``<mu_w, phi>`` for every word with digits ``<= D`` and length ``<= L``.

    Returns a list of ``(n, words, values)`` per length. Uses
    ``[a_1, rest] = 1/(a_1 + [rest])`` so each length reuses the previous one.
    """
    if max_digit < 1 or max_len < 1:
        raise DomainError("digit and length bounds must be >= 1")
    phi0 = float(phi(np.array([0.0]))[0])
    digits = np.arange(1, max_digit + 1, dtype=float)
    val = np.zeros(1)
    s = np.zeros(1)
    out = []
    for n in range(1, max_len + 1):
        val = (1.0 / (digits[:, None] + val[None, :])).ravel()
        s = (phi(val).reshape(max_digit, -1) + s[None, :]).ravel()
        out.append((n, words_array(max_digit, n), (phi0 + s) / (n + 1)))
    return out


def exact_fcf_value(phi: Potential, w):
    if w is None:
        return phi.exact(Fraction(0))
    return integrate(fcf_measure(w), phi, exact=True)


def fcf_sweep(phi: Potential, max_digit: int, max_len: int, top_k: int = 20, exact: bool | None = None) -> list[RankedMeasure]:
    """FCF measures and ``delta_0`` ranked by ``<mu, phi>``, best first.

    Ties are ordered by length, then lexicographically, with ``delta_0`` first.
    """
    vals = [float(phi(np.array([0.0]))[0])]
    words: list = [None]
    for n, ws, v in fcf_values(phi, max_digit, max_len):
        vals.extend(v.tolist())
        words.extend(map(tuple, ws.tolist()))
    vals_a = np.asarray(vals)
    # stable sort keeps delta_0, then shorter words, then lexicographic order
    order = np.argsort(-vals_a, kind="stable")
    if exact is None:
        exact = phi.is_exact
    head = order[: max(top_k, 1)]
    if exact:
        cut = vals_a[head[-1]] - EXACT_WINDOW * max(1.0, abs(vals_a[head[0]]))
        pool = order[: EXACT_CAP][vals_a[order[:EXACT_CAP]] >= cut]
        try:
            ev = [(exact_fcf_value(phi, words[i]), int(i)) for i in pool]
        except NotExact:
            ev = None
        if ev is not None:
            ranked = sorted(ev, key=functools.cmp_to_key(lambda a, b: -_cmp(a[0], b[0]) or (a[1] - b[1])))
            return [
                RankedMeasure(_label(words[i]), words[i], float(v), v) for v, i in ranked[:top_k]
            ]
    return [RankedMeasure(_label(words[i]), words[i], float(vals_a[i])) for i in head[:top_k]]


# ---------------------------------------------------------------------------
# global supremum


@dataclass(frozen=True)
class GlobalSupEstimate:
    q_star: float
    side: str  # invariant | fcf | tie
    invariant_value: float
    invariant_witness: str
    fcf_value: float
    fcf_witness: str
    sweep: tuple = field(default=())  # OrbitSearchResult per m

    def to_json(self) -> dict:
        return {
            "q_star": self.q_star,
            "side": self.side,
            "invariant_value": self.invariant_value,
            "invariant_witness": self.invariant_witness,
            "fcf_value": self.fcf_value,
            "fcf_witness": self.fcf_witness,
            "sweep": [r.to_json() for r in self.sweep],
        }


def global_sup_estimate(
    phi: Potential, m_max: int, max_period: int, max_digit: int, max_len: int, tie_tol: float = 1e-12
) -> GlobalSupEstimate:
    """Best value over periodic orbits (plus the fixed point 0) against the best FCF value.

    ``delta_0`` is both invariant and a member of the FCF side, so a potential
    maximized by ``delta_0`` reports a tie.
    """
    sweep = orbit_sweep(phi, m_max, max_period)
    best_orbit = max(sweep, key=lambda r: r.best_value)
    phi0 = float(phi(np.array([0.0]))[0])
    if phi0 > best_orbit.best_value:
        inv, inv_w = phi0, "delta0"
    else:
        inv, inv_w = best_orbit.best_value, "orbit" + str(best_orbit.best_word).replace(" ", "")
    top = fcf_sweep(phi, max_digit, max_len, top_k=1)[0]
    if abs(inv - top.value) <= tie_tol * max(1.0, abs(inv)):
        side = "tie"
    elif inv > top.value:
        side = "invariant"
    else:
        side = "fcf"
    return GlobalSupEstimate(max(inv, top.value), side, inv, inv_w, top.value, top.label, tuple(sweep))


def periodic_mean_float(phi: Potential, w) -> float:
    pts = kernels.periodic_orbit_points(np.asarray([w], dtype=np.int64))[0]
    return float(np.mean(phi(pts)))


__all__ = [
    "OrbitSearchResult",
    "RankedMeasure",
    "GlobalSupEstimate",
    "orbit_sweep",
    "restricted_sup_orbits",
    "exact_orbit_mean",
    "fcf_values",
    "fcf_sweep",
    "exact_fcf_value",
    "global_sup_estimate",
    "periodic_mean_float",
]
