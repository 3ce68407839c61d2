import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from gauss_ergopt import cf_core as cf
from gauss_ergopt.cf_core import INF, DomainError

from . import oracles


@pytest.mark.parametrize("x,expected", sorted(oracles.EXPANSIONS.items()))
def test_cf_expand_examples(x, expected):
    e = cf.cf_expand(x)
    assert (e.canonical, e.alternative) == expected
    assert not e.boundary


def test_cf_expand_one_is_boundary():
    e = cf.cf_expand(1)
    assert e.canonical == (1,) and e.alternative is None and e.boundary


@pytest.mark.parametrize("x", [0, Fraction(3, 2), -1])
def test_cf_expand_domain(x):
    with pytest.raises(DomainError):
        cf.cf_expand(x)


def test_cf_expand_matches_euclid_oracle():
    for den in range(2, 60):
        for num in range(1, den):
            x = Fraction(num, den)
            e = cf.cf_expand(x)
            assert e.canonical == oracles.euclid_digits(x)
            assert cf.eval_cf(e.canonical) == x == cf.eval_cf(e.alternative)


def test_continuants_example():
    c = cf.continuants((2, 3))
    assert c.p == (1, 0, 1, 3) and c.q == (0, 1, 2, 7)
    p, q = oracles.CONTINUANTS_23
    assert tuple(c.p_n(k) for k in range(3)) == p
    assert tuple(c.q_n(k) for k in range(3)) == q


def test_continuants_match_convergents():
    for w in itertools.product(range(1, 5), repeat=4):
        c = cf.continuants(w)
        ps, qs = oracles.naive_continuants(w)
        assert list(c.p[1:]) == ps and list(c.q[1:]) == qs


@pytest.mark.parametrize(
    "word,x,expected",
    [((5,), 0, Fraction(1, 5)), ((2, 3), 1, Fraction(4, 9)), ((2, INF, 7), Fraction(1, 3), Fraction(1, 2))],
)
def test_inverse_branch_examples(word, x, expected):
    assert cf.inverse_branch(word, Fraction(x)) == expected
    assert cf.inverse_branch_composed(word, Fraction(x)) == expected


def test_inverse_branch_leading_infinity():
    assert cf.inverse_branch((INF, 3), Fraction(1, 2)) == 0


def test_inverse_branch_float_and_exact_agree():
    for w in [(1,), (3, 1, 4), (1, 1, 1, 1, 1, 1)]:
        for x in [0.0, 0.25, 0.9]:
            assert math.isclose(cf.inverse_branch(w, x), float(oracles.fold(w, Fraction(x))), rel_tol=1e-14)


def test_cylinder_example():
    c = cf.cylinder((2, 3))
    assert (c.lo, c.hi, c.diameter) == oracles.CYLINDER_23


def test_branch_derivative_by_differences():
    w, x, h = (2, 1, 3), 0.3, 1e-6
    num = (cf.inverse_branch(w, x + h) - cf.inverse_branch(w, x - h)) / (2 * h)
    assert math.isclose(abs(num), cf.branch_derivative(w, x), rel_tol=1e-6)


def test_periodic_point_example():
    assert cf.periodic_point_quadratic((2, 3)) == oracles.PERIODIC_23
    x = cf.periodic_point((2, 3))
    assert math.isclose(float(x), oracles.PERIODIC_23_VALUE, rel_tol=1e-15)
    A, B, C = oracles.PERIODIC_23
    assert A * x * x + B * x + C == 0


def test_periodic_point_is_exactly_periodic():
    for w in [(1,), (1, 2), (3, 1, 2), (7, 1, 1, 5)]:
        x = cf.periodic_point(w)
        y = x
        for _ in w:
            y = cf.gauss_step(y)
        assert y == x


@pytest.mark.parametrize("a,b,expected", [(2, 3, 1 / 6), (5, INF, 1 / 5), (INF, INF, 0.0)])
def test_hat_rho(a, b, expected):
    assert math.isclose(cf.hat_rho(a, b), expected)


def test_gauss_step_edges():
    assert cf.gauss_step(Fraction(0)) == 0
    assert cf.gauss_step(Fraction(1)) == 0
    assert cf.gauss_step(Fraction(1, 3)) == 0
    assert cf.gauss_step(Fraction(3, 7)) == Fraction(1, 3)
    assert cf.gauss_step(0.0) == 0.0


def test_f_map_roundtrip():
    assert cf.f_map((2, 3)) == (2, 2, 1)
    assert cf.f_inverse((2, 2, 1)) == (2, 3)
    with pytest.raises(DomainError):
        cf.f_map((2, 1))


def test_as_word_parsing():
    assert cf.as_word("2, inf, 7") == (2, INF, 7)
    with pytest.raises(DomainError):
        cf.as_word([0, 1])


def test_constants():
    assert math.isclose(cf.THETA**2, cf.THETA + 1)
    for m in range(1, 10):
        assert 0 < cf.eta_m(m) < 1 and cf.lambda_m(m) > 1
    assert cf.K_alpha_safe(1.0) > cf.K_alpha(1.0) > 0


def test_em_bounds_order():
    lo, hi = cf.em_bounds(1)
    assert lo == hi  # E_1 is the golden-mean point
    for m in range(2, 6):
        lo, hi = cf.em_bounds(m)
        assert lo < hi


def test_words_array_shape():
    arr = cf.words_array(3, 2)
    assert arr.shape == (9, 2)
    assert {tuple(r) for r in arr.tolist()} == set(itertools.product(range(1, 4), repeat=2))
    assert np.all(arr >= 1)
