from fractions import Fraction

import pytest

from gauss_ergopt.ergopt import fcf_sweep, global_sup_estimate, orbit_sweep, restricted_sup_orbits
from gauss_ergopt.ergopt.search import exact_orbit_mean, fcf_values, periodic_mean_float
from gauss_ergopt.measures import fcf_measure, integrate
from gauss_ergopt.potentials import constant, distance_penalty, example_76, identity, neg_x
from gauss_ergopt.cf_core import periodic_point

from . import oracles


def test_exact_orbit_mean_golden():
    v = exact_orbit_mean(identity(), (1,))
    assert v == periodic_point((1,))


def test_periodic_mean_float_matches_oracle():
    phi = example_76()
    for w in [(1,), (1, 2), (3, 1, 1, 2)]:
        assert periodic_mean_float(phi, w) == pytest.approx(oracles.orbit_mean(phi, w), abs=1e-12)


@pytest.mark.parametrize("m,P", [(1, 3), (3, 3), (4, 4)])
def test_orbit_sweep_matches_brute_force(m, P):
    phi = example_76()
    r = restricted_sup_orbits(phi, m, P)
    value, word = oracles.brute_orbit_sup(phi, m, P)
    assert r.best_value == pytest.approx(value, abs=1e-12)
    assert oracles.orbit_mean(phi, r.best_word) == pytest.approx(value, abs=1e-12)


def test_restricted_sup_example_76_m20():
    r = restricted_sup_orbits(example_76(), 20, 4)
    assert -0.367 <= r.best_value <= -0.331
    assert r.best_word == (1, 20)
    assert r.exact and float(r.exact_value) == pytest.approx(r.best_value, abs=1e-12)


def test_orbit_sweep_is_monotone_in_m():
    sweep = orbit_sweep(example_76(), 8, 4)
    vals = [r.best_value for r in sweep]
    assert [r.m for r in sweep] == list(range(1, 9))
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_orbit_sweep_tie_breaks_lexicographically():
    r = restricted_sup_orbits(constant(2), 3, 3)
    assert r.best_word == (1,) and r.best_value == 2.0


def test_fcf_values_match_integrate():
    phi = example_76()
    for n, words, vals in fcf_values(phi, 4, 3):
        assert words.shape == (4**n, n)
        for w, v in zip(words.tolist(), vals):
            assert v == pytest.approx(float(integrate(fcf_measure(w), phi)), abs=1e-12)


def test_fcf_sweep_identity():
    top = fcf_sweep(identity(), 3, 2)[0]
    assert top.label == "mu(1,)" and top.value == pytest.approx(0.5)
    assert top.exact_value == Fraction(1, 2)


def test_fcf_sweep_puts_delta0_first_on_ties():
    ranked = fcf_sweep(neg_x(), 3, 2, top_k=3)
    assert ranked[0].label == "delta0" and ranked[0].value == 0.0


def test_fcf_sweep_example_76():
    top = fcf_sweep(example_76(), 6, 4)[0]
    assert top.label == "mu(1,)" and top.exact_value == 0


def test_global_sup_sides():
    est = global_sup_estimate(example_76(), 6, 4, 6, 4)
    assert est.side == "fcf" and est.q_star == 0.0 and est.fcf_witness == "mu(1,)"
    assert global_sup_estimate(neg_x(), 3, 3, 3, 3).side == "tie"
    dist = distance_penalty(constant(0), [periodic_point((1, 2)), periodic_point((2, 1))], 1)
    est = global_sup_estimate(dist, 4, 3, 4, 3)
    assert est.side == "invariant" and est.invariant_witness == "orbit(1,2)"
    assert est.q_star == pytest.approx(0.0, abs=1e-12)


def test_result_json():
    r = restricted_sup_orbits(example_76(), 2, 2)
    js = r.to_json()
    assert js["m"] == 2 and isinstance(js["best_word"], list)
