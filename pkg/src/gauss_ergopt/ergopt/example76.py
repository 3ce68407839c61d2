"""The piecewise-affine potential with value 0 on the FCF measure of ``(1)``.

``phi = -3x - 1`` on ``[0, 1/3]``, ``-2`` on ``[1/3, 3/4]``, ``12x - 11`` on
``[3/4, 1]``. The measure ``(delta_0 + delta_1)/2`` gives 0, while every
invariant measure on ``E_m`` stays at or below ``max(-1, -15/(2(m+2)))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..measures import DELTA0, fcf_measure, integrate
from ..potentials import example_76
from .classify import Budgets, classify
from .search import global_sup_estimate, orbit_sweep


def restricted_bound(m: int) -> Fraction:
    return max(Fraction(-1), Fraction(-15, 2 * (m + 2)))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: dict

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Example76Report:
    checks: tuple
    sweep: tuple = field(default=())  # (m, Q_m lower, bound)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [c.to_json() for c in self.checks],
            "sweep": [{"m": m, "Q_m_lower": q, "bound": b} for m, q, b in self.sweep],
        }


def example_7_6(
    m_max: int = 20,
    max_period: int = 5,
    max_digit: int = 8,
    max_len: int = 6,
    tol: float = 1e-2,
    bound_tol: float = 1e-6,
    budgets: Budgets | None = None,
) -> Example76Report:
    phi = example_76()
    checks = []

    v1 = integrate(fcf_measure((1,)), phi, exact=True)
    checks.append(Check("mu(1) value is 0", v1 == 0, {"value": str(v1)}))
    v0 = integrate(DELTA0, phi, exact=True)
    checks.append(Check("delta0 value is -1", v0 == -1, {"value": str(v0)}))

    sweep = orbit_sweep(phi, m_max, max_period)
    rows = []
    for r in sweep:
        bound = restricted_bound(r.m)
        ok = r.best_value <= float(bound) + bound_tol
        rows.append((r.m, r.best_value, float(bound)))
        checks.append(
            Check(
                f"Q_{r.m} lower bound below max(-1, -15/(2(m+2)))",
                ok,
                {"m": r.m, "value": r.best_value, "word": list(r.best_word), "bound": float(bound),
                 "exact": r.exact},
            )
        )

    est = global_sup_estimate(phi, m_max, max_period, max_digit, max_len)
    checks.append(
        Check("global supremum near 0", abs(est.q_star) <= tol,
              {"q_star": est.q_star, "side": est.side, "witness": est.fcf_witness})
    )
    cls = classify(phi, budgets)
    checks.append(
        Check("classified rationally maximized", cls.verdict == "rationally_maximized",
              {"verdict": cls.verdict, "certificate": cls.certificate})
    )
    return Example76Report(tuple(checks), tuple(rows))


__all__ = ["Check", "Example76Report", "example_7_6", "restricted_bound"]
