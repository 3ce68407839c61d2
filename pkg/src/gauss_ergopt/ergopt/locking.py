"""Locking experiments: perturb ``phi`` towards a rational orbit and test stability."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._backend import kernels
from ..cf_core import DomainError, cf_expand, f_map, format_rational, inverse_branch, parse_rational
from ..measures import extended_orbit, forward_orbit
from ..potentials import Composite, DistanceTerm, Potential, random_piecewise_affine


@dataclass(frozen=True)
class LockingConstants:
    x: Fraction
    extended_orbit: tuple
    delta: Fraction | None  # a third of the smallest gap in the extended orbit
    eps: Fraction | None
    C_x: float

    def to_json(self) -> dict:
        return {
            "x": format_rational(self.x),
            "extended_orbit": [format_rational(p) for p in self.extended_orbit],
            "delta": None if self.delta is None else format_rational(self.delta),
            "eps": None if self.eps is None else format_rational(self.eps),
            "C_x": self.C_x,
        }


def min_gap(points) -> Fraction:
    pts = sorted(points)
    return min(b - a for a, b in zip(pts, pts[1:]))


def locking_constants(x, alpha: float = 1.0) -> LockingConstants:
    """``delta``, ``eps`` and ``C_x = eps**-alpha`` for the rational point ``x``.

    For ``x = 0`` the extended orbit is ``{0}`` and ``C_x = 1``.
    """
    x = parse_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} outside [0, 1]")
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    ext = extended_orbit(x)
    if x == 0:
        return LockingConstants(x, ext, None, None, 1.0)
    delta = min_gap(ext) / 3
    if x == 1:
        eps = delta / (1 + delta)
    else:
        a = cf_expand(x).canonical
        r = inverse_branch(a, delta)
        l = inverse_branch(f_map(a), delta)
        eps = min(abs(r - x), abs(l - x))
    return LockingConstants(x, ext, delta, eps, float(eps) ** (-alpha))


def side_points(x, delta: Fraction):
    """``(R_delta(x), L_delta(x))`` for ``x`` in ``(0, 1)``."""
    a = cf_expand(x).canonical
    return inverse_branch(a, delta), inverse_branch(f_map(a), delta)


# ---------------------------------------------------------------------------
# the finite candidate family


@dataclass(frozen=True)
class _Group:
    labels: tuple
    points: np.ndarray  # (count, atoms); every atom has equal weight


@dataclass(frozen=True)
class CandidateFamily:
    """FCF measures, periodic measures and ``delta_0`` with precomputed atoms.

    Candidates are ordered ``delta_0``, FCF measures by length then word,
    periodic measures by length then word; the first maximum wins.
    """

    groups: tuple
    max_digit: int
    max_len: int
    m: int
    max_period: int

    @property
    def labels(self) -> list[str]:
        return [lab for g in self.groups for lab in g.labels]

    def __len__(self) -> int:
        return sum(len(g.labels) for g in self.groups)

    def values(self, phi: Potential) -> np.ndarray:
        return np.concatenate(
            [phi(g.points.ravel()).reshape(g.points.shape).mean(axis=1) for g in self.groups]
        )

    def argmax(self, phi: Potential):
        """``(label, value, margin)``; margin is the gap to the runner-up."""
        v = self.values(phi)
        i = int(np.argmax(v))
        best = float(v[i])
        rest = np.delete(v, i)
        margin = best - float(rest.max()) if rest.size else float("inf")
        return self.labels[i], best, margin


def _word_label(prefix: str, w) -> str:
    return prefix + str(tuple(int(a) for a in w)).replace(" ", "")


@functools.lru_cache(maxsize=4)
def candidate_family(max_digit: int = 8, max_len: int = 6, m: int = 8, max_period: int = 5) -> CandidateFamily:
    groups = [_Group(("delta0",), np.zeros((1, 1)))]
    digits = np.arange(1, max_digit + 1, dtype=float)
    vals = [np.zeros(1)]  # vals[n][i] = [word i of length n]
    for n in range(1, max_len + 1):
        vals.append((1.0 / (digits[:, None] + vals[-1][None, :])).ravel())
        count = max_digit**n
        idx = np.arange(count)
        # atoms of mu_w: 0 and the values of the suffixes of length 1..n
        pts = np.column_stack([vals[k][idx % max_digit**k] for k in range(0, n + 1)])
        words = np.indices((max_digit,) * n).reshape(n, -1).T + 1
        groups.append(_Group(tuple(_word_label("mu", w) for w in words), pts))
    words, lens = kernels.lyndon_words(m, max_period)
    for n in range(1, max_period + 1):
        sel = np.flatnonzero(lens == n)
        if sel.size:
            ws = words[sel, :n]
            groups.append(_Group(tuple(_word_label("orbit", w) for w in ws), kernels.periodic_orbit_points(ws)))
    return CandidateFamily(tuple(groups), max_digit, max_len, m, max_period)


# ---------------------------------------------------------------------------
# experiments


def perturbed_potential(phi: Potential, x, t, alpha: float, s=None) -> Composite:
    """``phi - t d(., O~(x))**alpha``, with ``- s d(., O(x))**alpha`` applied first when ``s`` is given."""
    x = parse_rational(x)
    items = [phi]
    if s is not None:
        items.append(DistanceTerm(-Fraction(s), forward_orbit(x), alpha))
    items.append(DistanceTerm(-Fraction(t), extended_orbit(x), alpha))
    return Composite.of(*items, alpha=min(phi.alpha, alpha))


@dataclass(frozen=True)
class Trial:
    index: int
    winner: str
    value: float
    margin: float
    unchanged: bool
    psi_seminorm: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class LockingReport:
    x: Fraction
    t: float
    s: float | None
    alpha: float
    seed: int
    constants: LockingConstants
    target_seminorm: float
    baseline: str
    baseline_value: float
    baseline_margin: float
    trials: tuple = field(default=())
    potential: dict = field(default_factory=dict)

    @property
    def fraction_unchanged(self) -> float:
        if not self.trials:
            return 1.0
        return sum(tr.unchanged for tr in self.trials) / len(self.trials)

    @property
    def winners(self) -> dict:
        out: dict = {}
        for tr in self.trials:
            out[tr.winner] = out.get(tr.winner, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "x": format_rational(self.x),
            "t": self.t,
            "s": self.s,
            "alpha": self.alpha,
            "seed": self.seed,
            "potential": self.potential,
            "constants": self.constants.to_json(),
            "target_seminorm": self.target_seminorm,
            "baseline": {"measure": self.baseline, "value": self.baseline_value, "margin": self.baseline_margin},
            "fraction_unchanged": self.fraction_unchanged,
            "winners": self.winners,
            "trials": [tr.to_json() for tr in self.trials],
        }


def locking_experiment(
    phi: Potential,
    x,
    t: float,
    trials: int = 20,
    seed: int = 0,
    s: float | None = None,
    scale: float = 0.9,
    n_knots: int = 8,
    alpha: float | None = None,
    family: CandidateFamily | None = None,
) -> LockingReport:
    """Compare the argmax over the candidate family before and after random perturbations.

    Each perturbation is piecewise affine with seminorm ``scale * t / C_x``.
    With ``scale < 1`` the argmax is expected to stay put.
    """
    if t <= 0:
        raise DomainError("t must be > 0")
    if s is not None and s <= 0:
        raise DomainError("s must be > 0")
    x = parse_rational(x)
    alpha = phi.alpha if alpha is None else alpha
    consts = locking_constants(x, alpha)
    fam = family or candidate_family()
    phi_t = perturbed_potential(phi, x, t, alpha, s)
    base, base_v, base_m = fam.argmax(phi_t)
    target = scale * t / consts.C_x
    rng = np.random.default_rng(seed)
    recs = []
    for i in range(trials):
        psi = random_piecewise_affine(rng, n_knots, target, alpha)
        win, val, margin = fam.argmax(Composite.of(phi_t, psi, alpha=phi_t.alpha))
        recs.append(Trial(i, win, val, margin, win == base, psi.seminorm_bound))
    return LockingReport(
        x, float(t), None if s is None else float(s), alpha, seed, consts, target,
        base, base_v, base_m, tuple(recs), phi.describe(),
    )


__all__ = [
    "LockingConstants",
    "locking_constants",
    "side_points",
    "CandidateFamily",
    "candidate_family",
    "perturbed_potential",
    "Trial",
    "LockingReport",
    "locking_experiment",
]
