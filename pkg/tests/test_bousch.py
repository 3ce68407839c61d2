import numpy as np
import pytest

from gauss_ergopt.bousch import (
    BouschOperator,
    bousch_apply,
    calibrated_subaction,
    drift_q_estimate,
    gauss_of_nodes,
    grid_seminorm_estimate,
    mane_residual,
    revealed_potential,
)
from gauss_ergopt.cf_core import K_alpha_safe
from gauss_ergopt.potentials import GridFunction, constant, example_76, identity, neg_x, random_piecewise_affine

from . import oracles


def test_constant_potential_shifts_by_c():
    u = GridFunction.constant(0.0, 256)
    v = bousch_apply(u, constant(3))
    assert np.all(v.values == 3.0)


def test_neg_x_fixes_zero():
    u = GridFunction.constant(0.0, 256)
    assert np.all(bousch_apply(u, neg_x()).values == 0.0)


def test_identity_first_iterate():
    # sup over branches of 1/(a+x) is attained at a = 1
    op = BouschOperator(identity(), 128)
    v = op.apply(np.zeros(129))
    assert np.allclose(v, 1.0 / (1.0 + op.x))


@pytest.mark.parametrize("name", ["example76", "neg_x"])
def test_matches_brute_force(name):
    phi = {"example76": example_76(), "neg_x": neg_x()}[name]
    n = 4096
    op = BouschOperator(phi, n)
    u = np.zeros(n + 1)
    for _ in range(2):
        u = op.apply(u)
    for i in (0, n // 5, n // 2, n - 3):
        assert u[i] == pytest.approx(oracles.brute_bousch(phi, i / n, 2), abs=1e-9)


def test_tail_is_exact_past_cutoff():
    # a potential peaking at 0 needs the far branches
    phi = random_piecewise_affine(np.random.default_rng(1), 16, 4.0)
    small = BouschOperator(phi, 512, branch_cutoff=2)
    big = BouschOperator(phi, 512, branch_cutoff=400)
    u = np.zeros(513)
    assert np.allclose(small.apply(u), big.apply(u), atol=1e-9)


def test_rejects_nonfinite():
    op = BouschOperator(identity(), 16)
    with pytest.raises(ValueError):
        op.apply(np.full(17, np.nan))


def test_drift_on_constant():
    d = drift_q_estimate(constant(3), n_iters=10, grid=256)
    assert (d.q_low, d.q_high) == pytest.approx((3.0, 3.0))


def test_drift_example_76():
    d = drift_q_estimate(example_76(), n_iters=200, grid=2048)
    assert -0.02 <= d.q_high <= 0.01
    assert d.q_high - d.q_low <= d.width_bound + 2.0 / 2048


def test_calibrated_subaction_example_76():
    phi = example_76()
    r = calibrated_subaction(phi, 0.0, n_cells=2048, window=16)
    assert r.residual <= 5e-3
    assert r.sup_norm_bound_check and r.seminorm_bound_check
    assert r.sup_norm <= K_alpha_safe(1.0) * phi.seminorm_bound + 1e-2
    rv = revealed_potential(phi, 0.0, r.u)
    assert rv.max_value <= 1e-2
    # 1 is in the zero locus; at the fixed point 0 the revealed potential is phi(0)
    assert 1.0 in rv.zero_points
    assert rv.values.values[0] == pytest.approx(-1.0)


def test_mane_residual_of_fixed_point_is_small():
    u = GridFunction.constant(0.0, 256)
    assert mane_residual(u, neg_x()) == 0.0
    assert mane_residual(u, constant(2), q=2.0) == 0.0


def test_gauss_of_nodes():
    g = gauss_of_nodes(4)
    assert np.allclose(g, [0.0, 0.0, 0.0, 1 / 3, 0.0])


def test_grid_seminorm_estimate_of_line():
    g = GridFunction.sample(lambda x: 3 * x, 64)
    assert grid_seminorm_estimate(g) == pytest.approx(3.0)


def test_threaded_apply_is_bit_identical(monkeypatch):
    phi = example_76()
    u = np.random.default_rng(0).standard_normal(8193)
    serial = BouschOperator(phi, 8192).apply(u)
    monkeypatch.setenv("ERGOPT_THREADS", "4")
    threaded = BouschOperator(phi, 8192).apply(u)
    assert np.array_equal(serial, threaded)
