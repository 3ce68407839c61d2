"""Continued-fraction arithmetic for the Gauss map.

Rationals are :class:`fractions.Fraction`; words are tuples of positive ints,
optionally containing :data:`INF` (the extended digit whose inverse branch is
the constant map to 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import numpy as np

from .surd import QuadSurd

INF = math.inf

Word = tuple
Number = Union[Fraction, float, QuadSurd]


class DomainError(ValueError):
    """Argument lies outside the domain of a continued-fraction operation."""


# ---------------------------------------------------------------------------
# constants

THETA = (math.sqrt(5.0) + 1.0) / 2.0
C0 = 2.0 * math.sqrt(5.0) / 5.0
SAFE_GROWTH_CONSTANT = 1.0 / THETA


def K_alpha(alpha: float) -> float:
    """Distortion constant as stated with ``c0``; recorded, not asserted."""
    return C0 ** (-2 * alpha) / (1.0 - THETA ** (-2 * alpha))


def K_alpha_safe(alpha: float) -> float:
    """Distortion constant built on the provable growth ``q_n >= theta^(n-1)``."""
    return THETA ** (2 * alpha) / (1.0 - THETA ** (-2 * alpha))


def eta_m(m: int) -> float:
    return 0.5 / (m + 2) ** 3


def lambda_m(m: int) -> float:
    return (1.0 - eta_m(m)) ** -2


@dataclass(frozen=True)
class Constants:
    theta: float = THETA
    c0: float = C0
    safe_growth_constant: float = SAFE_GROWTH_CONSTANT

    def K_alpha(self, alpha: float) -> float:
        return K_alpha(alpha)

    def K_alpha_safe(self, alpha: float) -> float:
        return K_alpha_safe(alpha)

    def eta_m(self, m: int) -> float:
        return eta_m(m)

    def lambda_m(self, m: int) -> float:
        return lambda_m(m)


# ---------------------------------------------------------------------------
# words

def as_word(w) -> Word:
    """Normalise a digit sequence (list, tuple, comma string) to a tuple."""
    if isinstance(w, str):
        parts = [p.strip() for p in w.replace("(", "").replace(")", "").split(",") if p.strip()]
        digits = []
        for p in parts:
            if p.lower() in ("inf", "infinity", "∞"):
                digits.append(INF)
            else:
                digits.append(int(p))
        w = digits
    out = []
    for a in w:
        if a == INF:
            out.append(INF)
        else:
            a = int(a)
            if a < 1:
                raise DomainError(f"digit {a} is not a positive integer")
            out.append(a)
    return tuple(out)


def is_finite_word(w: Sequence) -> bool:
    return all(a != INF for a in w)


def infinity_index(w: Sequence) -> float:
    """1-based position of the first INF digit, or ``math.inf``."""
    for i, a in enumerate(w, start=1):
        if a == INF:
            return i
    return INF


def in_class_A(w: Sequence) -> bool:
    return len(w) > 0 and is_finite_word(w) and w[-1] >= 2


def in_class_B(w: Sequence) -> bool:
    return len(w) > 0 and is_finite_word(w) and w[-1] == 1


def f_map(w: Sequence) -> Word:
    """``(a_1..a_n) -> (a_1..a_n - 1, 1)`` from class A to class B."""
    if not in_class_A(w):
        raise DomainError(f"{tuple(w)} is not in class A (last digit >= 2)")
    return tuple(w[:-1]) + (w[-1] - 1, 1)


def f_inverse(w: Sequence) -> Word:
    if not in_class_B(w) or len(w) < 2:
        raise DomainError(f"{tuple(w)} is not the image of a class-A word")
    return tuple(w[:-2]) + (w[-2] + 1,)


def shift(w: Sequence, i: int = 1) -> Word:
    return tuple(w[i:])


def rotations(w: Sequence) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))]


def is_primitive(w: Sequence) -> bool:
    n = len(w)
    w = tuple(w)
    return n > 0 and all(w != w[i:] + w[:i] for i in range(1, n) if n % i == 0)


# ---------------------------------------------------------------------------
# the map and its inverse branches

def gauss_step(x):
    """One step of the Gauss map; exact on Fractions and surds."""
    if isinstance(x, QuadSurd):
        if x.sign() == 0:
            return QuadSurd(Fraction(0))
        inv = x.reciprocal()
        return inv - inv.floor()
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        if x == 0:
            return Fraction(0)
        inv = 1 / x
        return inv - math.floor(inv)
    x = float(x)
    if x == 0.0:
        return 0.0
    inv = 1.0 / x
    if math.isinf(inv):
        # subnormal input: the fractional part of 1/x is lost, treat as 0
        return 0.0
    return inv - math.floor(inv)


def gauss_orbit(x, n: int) -> list:
    out = [x]
    for _ in range(n):
        x = gauss_step(x)
        out.append(x)
    return out


class Expansion(NamedTuple):
    canonical: Word
    alternative: Word | None
    boundary: bool = False


def cf_expand(x) -> Expansion:
    """Both finite continued-fraction expansions of a rational in (0, 1].

    ``x = 1`` is the boundary case: the single word ``(1,)`` is returned with
    ``boundary=True`` and no alternative.
    """
    x = Fraction(x)
    if x == 1:
        return Expansion((1,), None, True)
    if not 0 < x < 1:
        raise DomainError(f"{x} has no finite expansion in (0, 1]")
    digits = []
    num, den = x.numerator, x.denominator
    while num:
        a, r = divmod(den, num)
        digits.append(a)
        den, num = num, r
    canonical = tuple(digits)
    return Expansion(canonical, f_map(canonical))


def canonical_length(x: Fraction) -> int:
    """``n`` with ``x`` in ``R_n``; 0 for ``x = 0``."""
    x = Fraction(x)
    if x == 0:
        return 0
    if x == 1:
        raise DomainError("1 lies in no R_n")
    return len(cf_expand(x).canonical)


@dataclass(frozen=True)
class Continuants:
    """``p[k]``, ``q[k]`` for ``k = -1..n`` stored at list index ``k + 1``."""

    p: tuple
    q: tuple

    def p_n(self, k: int) -> int:
        return self.p[k + 1]

    def q_n(self, k: int) -> int:
        return self.q[k + 1]

    @property
    def n(self) -> int:
        return len(self.q) - 2


def continuants(w: Sequence) -> Continuants:
    w = as_word(w)
    if not w:
        raise DomainError("empty word")
    if not is_finite_word(w):
        raise DomainError("continuants need finite digits")
    p = [1, 0]
    q = [0, 1]
    for a in w:
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return Continuants(tuple(p), tuple(q))


def eval_cf(w: Sequence) -> Fraction:
    """``[a_1, ..., a_n]`` as a reduced Fraction."""
    w = as_word(w)
    if not w:
        raise DomainError("empty word")
    c = continuants(w)
    return Fraction(c.p[-1], c.q[-1])


def inverse_branch(w: Sequence, x):
    """``T_w(x)`` for a possibly extended word ``w``."""
    w = as_word(w) if not isinstance(w, tuple) else w
    iota = infinity_index(w)
    if iota == 1:
        return type(x)(0) if not isinstance(x, QuadSurd) else QuadSurd(Fraction(0))
    if iota != INF:
        return eval_cf(w[: iota - 1])
    c = continuants(w)
    pn, pn1, qn, qn1 = c.p[-1], c.p[-2], c.q[-1], c.q[-2]
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return (pn + x * pn1) / (qn + x * qn1)
    if isinstance(x, QuadSurd):
        return (x * pn1 + pn) / (x * qn1 + qn)
    return (pn + x * pn1) / (qn + x * qn1)


def inverse_branch_composed(w: Sequence, x):
    """``T_{a_1} o ... o T_{a_n}(x)`` by explicit composition (reference path)."""
    for a in reversed(tuple(w)):
        if a == INF:
            x = Fraction(0) if isinstance(x, (Fraction, int)) else 0.0
        else:
            x = 1 / (a + x)
    return x


def branch_derivative(w: Sequence, x: float) -> float:
    c = continuants(w)
    return (c.q[-1] + x * c.q[-2]) ** -2


@dataclass(frozen=True)
class CylinderInterval:
    word: Word
    lo: Fraction
    hi: Fraction

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def cylinder(w: Sequence) -> CylinderInterval:
    w = as_word(w)
    if not w or not is_finite_word(w):
        raise DomainError("cylinder needs a finite nonempty word")
    e0 = inverse_branch(w, Fraction(0))
    e1 = inverse_branch(w, Fraction(1))
    lo, hi = (e0, e1) if len(w) % 2 == 0 else (e1, e0)
    return CylinderInterval(w, lo, hi)


def periodic_point(w: Sequence) -> QuadSurd:
    """The fixed point of ``T_w`` in (0, 1), i.e. ``[overline(w)]``."""
    w = as_word(w)
    if not w or not is_finite_word(w):
        raise DomainError("periodic point needs a finite nonempty word")
    c = continuants(w)
    pn, pn1, qn, qn1 = c.p[-1], c.p[-2], c.q[-1], c.q[-2]
    return QuadSurd.from_quadratic(qn1, qn - pn1, -pn)


def periodic_point_quadratic(w: Sequence) -> tuple[int, int, int]:
    """Integer coefficients ``(A, B, C)`` of the quadratic the periodic point solves."""
    c = continuants(as_word(w))
    return c.q[-2], c.q[-1] - c.p[-2], -c.p[-1]


def em_bounds(m: int) -> tuple[QuadSurd, QuadSurd]:
    """``(min E_m, max E_m) = ([overline(m,1)], [overline(1,m)])``."""
    if m < 1:
        raise DomainError("m must be >= 1")
    lo = periodic_point((m, 1))
    hi = periodic_point((1, m))
    assert lo > Fraction(1, m + 1) and hi < Fraction(m + 1, m + 2)
    return lo, hi


def hat_rho(a, b) -> float:
    ia = 0.0 if a == INF else 1.0 / a
    ib = 0.0 if b == INF else 1.0 / b
    return abs(ia - ib)


def hat_rho_exact(a, b) -> Fraction:
    ia = Fraction(0) if a == INF else Fraction(1, a)
    ib = Fraction(0) if b == INF else Fraction(1, b)
    return abs(ia - ib)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse rational {s!r}") from exc


def words_array(max_digit: int, length: int) -> np.ndarray:
    """All words in ``{1..max_digit}^length`` in lexicographic order."""
    grids = np.indices((max_digit,) * length).reshape(length, -1).T
    return grids + 1
