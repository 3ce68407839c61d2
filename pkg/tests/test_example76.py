from fractions import Fraction

from gauss_ergopt.ergopt import Budgets, example_7_6
from gauss_ergopt.ergopt.example76 import restricted_bound


def test_restricted_bound():
    assert restricted_bound(1) == Fraction(-1)
    assert restricted_bound(6) == Fraction(-15, 16)
    assert restricted_bound(20) == Fraction(-15, 44)


def test_small_report():
    rep = example_7_6(m_max=6, max_period=4, max_digit=5, max_len=4,
                      budgets=Budgets(m_max=4, max_period=3, max_digit=5, max_len=3, edge_budget=50_000))
    assert rep.all_passed, [c.name for c in rep.failed()]
    js = rep.to_json()
    assert js["all_passed"] and len(js["sweep"]) == 6
    assert all(row["Q_m_lower"] <= row["bound"] + 1e-6 for row in js["sweep"])
