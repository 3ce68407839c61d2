from fractions import Fraction

import numpy as np
import pytest

from gauss_ergopt.cf_core import periodic_point
from gauss_ergopt.potentials import (
    Composite,
    DistanceTerm,
    GridFunction,
    NotExact,
    PiecewiseAffine,
    Tabulated,
    constant,
    distance_penalty,
    example_76,
    from_json,
    identity,
    neg_x,
    random_piecewise_affine,
)

F = Fraction


def test_example_76_values():
    phi = example_76()
    assert [phi.exact(F(x)) for x in (0, 1, F(1, 3), F(3, 4))] == [-1, 1, -2, -2]
    assert phi.lipschitz == 12
    assert phi.value(0.5) == -2.0


def test_exact_at_surd():
    phi = identity()
    x = periodic_point((1,))
    assert phi.exact(x) == x


def test_piecewise_validation():
    with pytest.raises(ValueError):
        PiecewiseAffine(((0, 0), (F(1, 2), 1)))
    with pytest.raises(ValueError):
        PiecewiseAffine(((0, 0), (F(1, 2), 1), (F(1, 2), 2), (1, 0)))
    with pytest.raises(ValueError):
        PiecewiseAffine(((0, 0), (1, 1)), alpha=1.5)
    with pytest.raises(ValueError):
        example_76().exact(F(3, 2))


def test_interval_max():
    phi = example_76()
    assert phi.interval_max(0.0, 0.5) == -1.0
    assert phi.interval_max_exact(F(1, 4), F(1, 2)) == -F(7, 4)
    assert phi.interval_max(0.8, 0.9) == pytest.approx(12 * 0.9 - 11)


def test_distance_penalty_exact_and_float():
    pts = (F(0), F(1, 2))
    phi = distance_penalty(constant(0), pts, F(1, 2))
    assert phi.exact(F(1, 3)) == -F(1, 12)
    assert phi.value(0.75) == pytest.approx(-0.125)
    assert phi.seminorm_bound == pytest.approx(0.5)


def test_distance_term_with_small_beta_is_not_exact():
    term = DistanceTerm(-1.0, (F(0),), 0.5)
    with pytest.raises(NotExact):
        term.exact(F(1, 4))
    assert term(np.array([0.25]))[0] == pytest.approx(-0.5)


def test_distance_to_surd_orbit():
    term = DistanceTerm(F(-1), (periodic_point((1,)),))
    assert term(np.array([0.5]))[0] == pytest.approx(-(0.6180339887498949 - 0.5))


def test_composite_sum():
    phi = identity() + neg_x()
    assert isinstance(phi, Composite)
    xs = np.linspace(0, 1, 11)
    assert np.allclose(phi(xs), 0.0)
    assert phi.exact(F(2, 7)) == 0


def test_json_roundtrip():
    for phi in [example_76(), distance_penalty(example_76(), (F(0), F(1)), F(1, 2))]:
        again = from_json(phi.describe())
        xs = np.linspace(0, 1, 101)
        assert np.array_equal(again(xs), phi(xs))


def test_grid_function_interpolation():
    g = GridFunction.sample(lambda x: 2 * x, 8)
    assert g(np.array([0.3]))[0] == pytest.approx(0.6)
    assert g.lipschitz() == pytest.approx(2.0)
    assert (g - g).sup_norm() == 0
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, np.nan]))


def test_tabulated_potential():
    t = Tabulated(GridFunction.sample(np.sin, 64))
    assert t.seminorm_bound <= 1.0
    assert t.value(0.5) == pytest.approx(np.sin(0.5), abs=1e-4)


def test_random_piecewise_affine_seminorm():
    rng = np.random.default_rng(3)
    for target in (0.5, 2.0, 7.0):
        phi = random_piecewise_affine(rng, 8, target)
        assert phi.seminorm_bound == pytest.approx(target, rel=1e-9)
