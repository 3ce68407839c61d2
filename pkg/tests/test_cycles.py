import itertools

import numpy as np
import pytest

from gauss_ergopt.cf_core import cylinder
from gauss_ergopt.ergopt import BudgetExceeded, restricted_sup_cycle_bound, restricted_sup_orbits
from gauss_ergopt.ergopt.cycles import (
    collatz_wielandt,
    cylinder_endpoints,
    cylinder_max,
    debruijn,
    deepest_cycle_bound,
    howard,
    karp,
)
from gauss_ergopt.potentials import constant, example_76, identity

from . import oracles


def test_cylinder_endpoints_match_exact():
    words = np.array(list(itertools.product(range(1, 4), repeat=3)))
    lo, hi = cylinder_endpoints(words)
    for w, a, b in zip(words.tolist(), lo, hi):
        c = cylinder(w)
        assert a == pytest.approx(float(c.lo)) and b == pytest.approx(float(c.hi))


def test_cylinder_max_exact_for_piecewise_affine():
    phi = example_76()
    got = cylinder_max(phi, np.array([0.2, 0.7]), np.array([0.5, 0.9]))
    assert got == pytest.approx([-1.6, 12 * 0.9 - 11], abs=1e-12)


def test_debruijn_successors():
    succ = debruijn(2, 2)
    assert succ.tolist() == [[0, 1], [2, 3], [0, 1], [2, 3]]


def _random_graph(rng, m, k):
    succ = debruijn(m, k)
    w = rng.standard_normal(succ.shape)
    return w, succ


@pytest.mark.parametrize("seed", range(6))
def test_howard_matches_karp(seed):
    rng = np.random.default_rng(seed)
    w, succ = _random_graph(rng, 3, 3)
    lam, x, _ = howard(w, succ)
    assert lam == pytest.approx(karp(w, succ), abs=1e-10)
    edges = {(u, int(succ[u, j])): float(w[u, j]) for u in range(succ.shape[0]) for j in range(succ.shape[1])}
    assert lam == pytest.approx(oracles.karp(edges, succ.shape[0]), abs=1e-10)
    assert collatz_wielandt(w, succ, x) >= lam - 1e-12


def test_collatz_wielandt_is_upper_bound_for_any_vector():
    rng = np.random.default_rng(9)
    w, succ = _random_graph(rng, 2, 4)
    lam = karp(w, succ)
    for _ in range(5):
        assert collatz_wielandt(w, succ, rng.standard_normal(succ.shape[0])) >= lam - 1e-12


def test_constant_bound():
    cb = restricted_sup_cycle_bound(constant(2), 3, 2)
    assert cb.value == pytest.approx(2.0, abs=1e-12)


def test_identity_m1():
    cb = restricted_sup_cycle_bound(identity(), 1, 3)
    assert cb.value == pytest.approx(0.625, abs=1e-12)
    assert cb.value >= 0.6180339887498949


@pytest.mark.parametrize("m,k", [(2, 5), (4, 4), (5, 6)])
def test_bound_above_orbit_lower_bound(m, k):
    phi = example_76()
    cb = restricted_sup_cycle_bound(phi, m, k)
    low = restricted_sup_orbits(phi, m, 5).best_value
    assert cb.value >= low - 1e-12
    assert cb.value - low < 0.05


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        restricted_sup_cycle_bound(identity(), 10, 8, budget=1000)
    assert exc.value.partial_depth == 2
    cb = deepest_cycle_bound(identity(), 10, budget=1000)
    assert cb.depth == 2


def test_bad_arguments():
    from gauss_ergopt.cf_core import DomainError

    with pytest.raises(DomainError):
        restricted_sup_cycle_bound(identity(), 0, 2)
