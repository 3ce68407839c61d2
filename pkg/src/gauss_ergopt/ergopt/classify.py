"""Heuristic classification of a potential from finite sweeps.

The verdicts are numerical evidence only; nothing here is a proof.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..potentials import Potential
from .cycles import DEFAULT_BUDGET, BudgetExceeded, deepest_cycle_bound
from .search import fcf_sweep, orbit_sweep

VERDICTS = ("essentially_compact", "rationally_maximized", "undetermined")


@dataclass(frozen=True)
class Budgets:
    m_max: int = 8
    max_period: int = 5
    max_digit: int = 8
    max_len: int = 6
    margin: float = 1e-9  # orbit value must beat the FCF side by this much
    stable_tol: float = 1e-3  # gap between consecutive Q_m lower bounds
    bound_tol: float = 1e-2  # slack when comparing the FCF value to the cycle bound
    edge_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for name in ("m_max", "max_period", "max_digit", "max_len", "edge_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("margin", "stable_tol", "bound_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class Classification:
    verdict: str
    certificate: dict
    attaining: tuple = field(default=())
    sweep: tuple = field(default=())  # (m, Q_m lower) pairs

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": self.certificate,
            "attaining": list(self.attaining),
            "sweep": [{"m": m, "Q_m_lower": q} for m, q in self.sweep],
            "heuristic": True,
        }


def classify(phi: Potential, budgets: Budgets | None = None) -> Classification:
    """Sort ``phi`` into essentially compact, rationally maximized, or undetermined.

    Order of checks: an orbit strictly beating every FCF candidate with a
    settled m-sweep gives ``essentially_compact``; an orbit tying the best
    FCF candidate gives ``undetermined`` with every attaining candidate
    listed; an FCF value reaching the cycle upper bound for ``E_{m_max}``
    gives ``rationally_maximized``.
    """
    b = budgets or Budgets()
    sweep = orbit_sweep(phi, b.m_max, b.max_period)
    lows = [(r.m, r.best_value) for r in sweep]
    ranked = fcf_sweep(phi, b.max_digit, b.max_len, top_k=8)
    top = ranked[0]
    fcf_top = top.value
    tie_scale = b.margin * max(1.0, abs(fcf_top))
    fcf_attaining = tuple(r.label for r in ranked if r.value >= fcf_top - tie_scale)

    best = max(sweep, key=lambda r: r.best_value)
    orbit_label = "orbit" + str(best.best_word).replace(" ", "")
    for i, r in enumerate(sweep):
        if r.best_value < fcf_top + tie_scale:
            continue
        tail = [q for _, q in lows[i:]]
        gap = max(tail) - min(tail)
        if gap <= b.stable_tol:
            return Classification(
                "essentially_compact",
                {"m": r.m, "word": list(r.best_word), "value": r.best_value,
                 "fcf_top": fcf_top, "gap": r.best_value - fcf_top, "sweep_spread": gap},
                (orbit_label,),
                tuple(lows),
            )

    if abs(best.best_value - fcf_top) <= tie_scale:
        return Classification(
            "undetermined",
            {"reason": "tie", "value": fcf_top, "orbit_value": best.best_value},
            (orbit_label,) + fcf_attaining,
            tuple(lows),
        )

    try:
        cb = deepest_cycle_bound(phi, b.m_max, b.edge_budget)
        upper, depth = cb.value, cb.depth
    except BudgetExceeded as exc:
        upper, depth = None, exc.partial_depth
    if upper is not None and fcf_top >= upper - b.bound_tol:
        return Classification(
            "rationally_maximized",
            {"measure": top.label, "value": fcf_top, "m": b.m_max, "depth": depth,
             "cycle_upper_bound": upper, "tol": b.bound_tol},
            fcf_attaining,
            tuple(lows),
        )
    return Classification(
        "undetermined",
        {"reason": "no criterion met", "fcf_top": fcf_top, "orbit_best": best.best_value,
         "cycle_upper_bound": upper, "depth": depth},
        fcf_attaining,
        tuple(lows),
    )


__all__ = ["Budgets", "Classification", "classify", "VERDICTS"]
