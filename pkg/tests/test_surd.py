import math
from fractions import Fraction

import pytest

from gauss_ergopt.surd import QuadSurd, sign_a_plus_b_sqrt, sign_two_radicals


def test_perfect_square_collapses_to_rational():
    s = QuadSurd(Fraction(1), Fraction(2), 9)
    assert s.is_rational and s == 7


def test_from_quadratic_is_larger_root():
    s = QuadSurd.from_quadratic(1, -1, -1)
    assert math.isclose(float(s), (1 + math.sqrt(5)) / 2)
    assert s * s - s - 1 == 0


def test_field_arithmetic_roundtrip():
    x = QuadSurd(Fraction(1, 3), Fraction(2, 5), 7)
    y = QuadSurd(Fraction(-4), Fraction(1, 2), 7)
    assert (x * y) / y == x
    assert (x + y) - y == x
    assert x * x.reciprocal() == 1


def test_reciprocal_of_zero():
    with pytest.raises(ZeroDivisionError):
        QuadSurd(Fraction(0)).reciprocal()


@pytest.mark.parametrize(
    "a,b,d,expected",
    [
        (Fraction(-3), Fraction(2), 2, -1),  # 2*sqrt2 < 3
        (Fraction(-3), Fraction(2), 3, 1),
        (Fraction(0), Fraction(-1), 5, -1),
        (Fraction(5), Fraction(0), 0, 1),
    ],
)
def test_sign(a, b, d, expected):
    assert sign_a_plus_b_sqrt(a, b, d) == expected


def test_sign_two_radicals_close_values():
    # sqrt(2) + sqrt(3) vs pi: 3.1463 > 3.14159
    assert sign_two_radicals(Fraction(-314159, 100000), Fraction(1), 2, Fraction(1), 3) == 1


def test_floor_near_integer():
    # 1 + 1e-30 style values: sqrt(10^12 + 1) is just above 10^6
    s = QuadSurd(Fraction(0), Fraction(1), 10**12 + 1)
    assert s.floor() == 10**6
    assert (-s).floor() == -(10**6) - 1


def test_ordering_matches_floats():
    vals = [QuadSurd(Fraction(k, 7), Fraction(1, 3), 2) for k in range(-5, 5)]
    vals += [QuadSurd(Fraction(k, 5)) for k in range(-5, 5)]
    by_surd = sorted(vals)
    assert [float(v) for v in by_surd] == sorted(float(v) for v in vals)
