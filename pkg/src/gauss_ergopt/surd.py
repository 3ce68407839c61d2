"""Exact real quadratic surds ``a + b*sqrt(d)`` with rational ``a``, ``b``.

Periodic points of the Gauss map are quadratic irrationals, and the Gauss map
sends ``Q(sqrt(d))`` to itself, so a whole periodic orbit can be carried in a
single field without ever reducing ``d`` to its squarefree part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_a_plus_b_sqrt(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of ``a + b*sqrt(d)`` for ``d >= 0``."""
    sa, sb = _sign(a), _sign(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2 d
    return sa * _sign(a * a - b * b * d)


def sign_two_radicals(a: Fraction, b: Fraction, d: int, c: Fraction, e: int) -> int:
    """Exact sign of ``a + b*sqrt(d) + c*sqrt(e)``."""
    x_sign = _sign_sum_radicals(b, d, c, e)
    sa = _sign(a)
    if x_sign == 0:
        return sa
    if sa == 0 or sa == x_sign:
        return x_sign if sa == 0 else sa
    # a and X of opposite sign: sign(a) * sign(a^2 - X^2)
    # X^2 = b^2 d + c^2 e + 2 b c sqrt(d e)
    r = a * a - b * b * d - c * c * e
    s = -2 * b * c
    return sa * sign_a_plus_b_sqrt(r, s, d * e)


def _sign_sum_radicals(b: Fraction, d: int, c: Fraction, e: int) -> int:
    # sign of b sqrt(d) + c sqrt(e)
    sb = _sign(b) if d else 0
    sc = _sign(c) if e else 0
    if sb == 0:
        return sc
    if sc == 0 or sb == sc:
        return sb
    return sb * _sign(b * b * d - c * c * e)


@dataclass(frozen=True)
class QuadSurd:
    """The real number ``a + b*sqrt(d)``.

    ``d`` is a positive non-square integer whenever ``b != 0``; a surd with
    ``b == 0`` is an ordinary rational and carries ``d = 0``.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        a, b, d = Fraction(self.a), Fraction(self.b), int(self.d)
        if b != 0:
            root = _isqrt_exact(d)
            if root is not None:
                a, b, d = a + b * root, Fraction(0), 0
        else:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def rational(cls, r: RationalLike) -> "QuadSurd":
        return cls(Fraction(r))

    @classmethod
    def from_quadratic(cls, A: int, B: int, C: int) -> "QuadSurd":
        """Larger real root of ``A x^2 + B x + C`` (``A > 0``)."""
        if A <= 0:
            raise ValueError("leading coefficient must be positive")
        disc = B * B - 4 * A * C
        if disc < 0:
            raise ValueError("no real root")
        return cls(Fraction(-B, 2 * A), Fraction(1, 2 * A), disc)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        # avoid catastrophic cancellation when a and b sqrt(d) nearly cancel
        a, b, d = self.a, self.b, self.d
        if (a > 0) != (b > 0) and a != 0:
            # a + b sqrt d = (a^2 - b^2 d) / (a - b sqrt d)
            num = a * a - b * b * d
            den = float(a) - float(b) * math.sqrt(d)
            return float(num) / den
        return float(a) + float(b) * math.sqrt(d)

    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.b != 0 and self.b != 0 and other.d != self.d:
                raise ValueError("surds live in different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(Fraction(other))
        return NotImplemented

    def _field(self, other: "QuadSurd") -> int:
        return self.d if self.b != 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadSurd":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return QuadSurd(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def sign(self) -> int:
        return sign_a_plus_b_sqrt(self.a, self.b, self.d)

    def compare(self, other) -> int:
        """Exact three-way comparison with a rational or a same-field surd."""
        if isinstance(other, QuadSurd) and other.b != 0 and self.b != 0 and other.d != self.d:
            return sign_two_radicals(self.a - other.a, self.b, self.d, -other.b, other.d)
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadSurd)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def floor(self) -> int:
        guess = math.floor(float(self))
        # float may be off by one near integers; fix exactly
        while self.compare(guess) < 0:
            guess -= 1
        while self.compare(guess + 1) >= 0:
            guess += 1
        return guess

    def __repr__(self) -> str:
        if self.b == 0:
            return f"QuadSurd({self.a})"
        return f"QuadSurd({self.a} + {self.b}*sqrt({self.d}))"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sgn = "+" if self.b > 0 else "-"
        return f"{self.a} {sgn} {abs(self.b)}*sqrt({self.d})"
