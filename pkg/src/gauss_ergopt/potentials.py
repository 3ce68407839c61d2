"""Potentials on [0, 1] with Hölder data.

Three forms are provided:

* :class:`PiecewiseAffine` - continuous, affine between rational knots; exact
  at rational and quadratic-surd points.
* :class:`Tabulated` - a :class:`GridFunction` read by linear interpolation.
* :class:`Composite` - a sum of potentials plus terms ``c * d(x, S)**beta``.

Every potential evaluates vectorised on float arrays, reports an upper bound
on its ``alpha``-Hölder seminorm, a list of knots between which it is convex
(so its maximum over an interval sits at a knot or an endpoint), and a
certified upper bound on its maximum over an interval.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .surd import QuadSurd


class NotExact(TypeError):
    """The potential has no exact evaluation at the requested point."""


def _to_exact(x):
    if isinstance(x, QuadSurd):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise NotExact(f"{x!r} is not an exact point")


def _exact_cmp(x, c: Fraction) -> int:
    if isinstance(x, QuadSurd):
        return x.compare(c)
    return (x > c) - (x < c)


def _exact_abs(x):
    if isinstance(x, QuadSurd):
        return -x if x.sign() < 0 else x
    return abs(x)


class Potential:
    alpha: float = 1.0

    def __call__(self, x):
        raise NotImplementedError

    def exact(self, x):
        raise NotExact(type(self).__name__)

    @property
    def is_exact(self) -> bool:
        return False

    @property
    def seminorm_bound(self) -> float:
        raise NotImplementedError

    def knots(self) -> np.ndarray:
        """Points between which the potential is convex."""
        return np.array([0.0, 1.0])

    @property
    def knot_convex(self) -> bool:
        return True

    def interval_max(self, lo: float, hi: float) -> float:
        """Certified upper bound of the potential on ``[lo, hi]``."""
        if self.knot_convex:
            ks = self.knots()
            inner = ks[(ks > lo) & (ks < hi)]
            pts = np.concatenate(([lo, hi], inner))
            return float(np.max(self(pts)))
        mid = 0.5 * (lo + hi)
        return float(self(np.array([mid]))[0]) + self.seminorm_bound * (0.5 * (hi - lo)) ** self.alpha

    def value(self, x) -> float:
        return float(self(np.asarray([float(x)]))[0])

    def __add__(self, other: "Potential") -> "Composite":
        return Composite.of(self, other)

    def shifted(self, c: float) -> "Composite":
        return Composite.of(self, constant(c))

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PiecewiseAffine(Potential):
    """Continuous potential, affine between consecutive ``(x, y)`` knots.

    Knots must start at 0, end at 1 and be strictly increasing in ``x``.
    """

    points: tuple
    alpha: float = 1.0

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
        if len(pts) < 2 or pts[0][0] != 0 or pts[-1][0] != 1:
            raise ValueError("knots must cover [0, 1]")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise ValueError("knot abscissae must increase strictly")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_xs", np.array([float(p[0]) for p in pts]))
        object.__setattr__(self, "_ys", np.array([float(p[1]) for p in pts]))
        object.__setattr__(self, "_xf", [p[0] for p in pts])

    @property
    def slopes(self) -> list[Fraction]:
        return [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(self.points, self.points[1:])]

    @property
    def lipschitz(self) -> Fraction:
        return max(abs(s) for s in self.slopes)

    @property
    def seminorm_bound(self) -> float:
        # on [0,1], |x-y| <= |x-y|**alpha, so the Lipschitz constant bounds every alpha-seminorm
        return float(self.lipschitz)

    def __call__(self, x):
        return np.interp(x, self._xs, self._ys)

    @property
    def is_exact(self) -> bool:
        return True

    def exact(self, x):
        x = _to_exact(x)
        if _exact_cmp(x, Fraction(0)) < 0 or _exact_cmp(x, Fraction(1)) > 0:
            raise ValueError("point outside [0, 1]")
        # locate by float then correct exactly
        k = bisect.bisect_right(self._xf, float(x)) - 1
        k = min(max(k, 0), len(self.points) - 2)
        while k > 0 and _exact_cmp(x, self._xf[k]) < 0:
            k -= 1
        while k < len(self.points) - 2 and _exact_cmp(x, self._xf[k + 1]) > 0:
            k += 1
        (x0, y0), (x1, y1) = self.points[k], self.points[k + 1]
        return (x - x0) * ((y1 - y0) / (x1 - x0)) + y0

    def knots(self) -> np.ndarray:
        return self._xs

    def interval_max(self, lo: float, hi: float) -> float:
        xs = self._xs
        inner = xs[(xs > lo) & (xs < hi)]
        return float(np.max(self(np.concatenate(([lo, hi], inner)))))

    def interval_max_exact(self, lo: Fraction, hi: Fraction) -> Fraction:
        cands = [lo, hi] + [x for x in self._xf if lo < x < hi]
        return max(self.exact(c) for c in cands)

    def scaled(self, c) -> "PiecewiseAffine":
        c = Fraction(c)
        return PiecewiseAffine(tuple((x, c * y) for x, y in self.points), self.alpha)

    def describe(self) -> dict:
        return {
            "form": "piecewise_affine",
            "alpha": self.alpha,
            "points": [[_fmt(x), _fmt(y)] for x, y in self.points],
        }


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def constant(c) -> PiecewiseAffine:
    c = Fraction(c)
    return PiecewiseAffine(((0, c), (1, c)))


def identity() -> PiecewiseAffine:
    return PiecewiseAffine(((0, 0), (1, 1)))


def neg_x() -> PiecewiseAffine:
    return PiecewiseAffine(((0, 0), (1, -1)))


def example_76() -> PiecewiseAffine:
    """``-3x-1`` on [0,1/3], ``-2`` on [1/3,3/4], ``12x-11`` on [3/4,1]."""
    return PiecewiseAffine(
        ((0, -1), (Fraction(1, 3), -2), (Fraction(3, 4), -2), (1, 1))
    )


# ---------------------------------------------------------------------------
# grid functions


@dataclass(frozen=True)
class GridFunction:
    """Samples at ``x_i = i / n_cells``, read by linear interpolation."""

    values: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("need at least two samples")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function has non-finite values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_cells(self) -> int:
        return self.values.size - 1

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.values.size)

    @classmethod
    def sample(cls, f, n_cells: int, alpha: float = 1.0) -> "GridFunction":
        return cls(np.asarray(f(np.linspace(0.0, 1.0, n_cells + 1)), dtype=float), alpha)

    @classmethod
    def constant(cls, c: float, n_cells: int, alpha: float = 1.0) -> "GridFunction":
        return cls(np.full(n_cells + 1, float(c)), alpha)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        n = self.n_cells
        s = np.clip(x, 0.0, 1.0) * n
        i = np.minimum(s.astype(np.int64), n - 1)
        w = s - i
        v = self.values
        return v[i] * (1.0 - w) + v[i + 1] * w

    def __add__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.values + other.values, self.alpha)
        return GridFunction(self.values + float(other), self.alpha)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.values - other.values, self.alpha)
        return GridFunction(self.values - float(other), self.alpha)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def lipschitz(self) -> float:
        return float(np.max(np.abs(np.diff(self.values)))) * self.n_cells


@dataclass(frozen=True)
class Tabulated(Potential):
    grid: GridFunction
    alpha: float = 1.0

    def __call__(self, x):
        return self.grid(x)

    @property
    def seminorm_bound(self) -> float:
        return self.grid.lipschitz()

    def knots(self) -> np.ndarray:
        return self.grid.nodes

    def describe(self) -> dict:
        return {"form": "tabulated", "alpha": self.alpha, "n_cells": self.grid.n_cells}


# ---------------------------------------------------------------------------
# composites


@dataclass(frozen=True)
class DistanceTerm:
    """``coef * d(x, S)**beta`` for a finite set ``S`` of exact points."""

    coef: float
    points: tuple
    beta: float = 1.0

    def __post_init__(self):
        pts = tuple(p if isinstance(p, QuadSurd) else Fraction(p) for p in self.points)
        if not pts:
            raise ValueError("distance term needs a nonempty set")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_fpts", np.sort(np.array([float(p) for p in pts])))

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        p = self._fpts
        j = np.searchsorted(p, x)
        lo = p[np.clip(j - 1, 0, p.size - 1)]
        hi = p[np.clip(j, 0, p.size - 1)]
        return np.minimum(np.abs(x - lo), np.abs(x - hi))

    def __call__(self, x):
        return float(self.coef) * self.distance(x) ** self.beta

    @property
    def is_exact(self) -> bool:
        return self.beta == 1 and isinstance(self.coef, (int, Fraction)) and all(
            isinstance(p, Fraction) for p in self.points
        )

    def exact(self, x):
        if not self.is_exact:
            raise NotExact("distance term is not exact")
        x = _to_exact(x)
        best = None
        for p in self.points:
            d = _exact_abs(x - p)
            if best is None or _exact_cmp_any(d, best) < 0:
                best = d
        return best * Fraction(self.coef)

    def seminorm(self, alpha: float) -> float:
        # |d^b(x) - d^b(y)| <= |x-y|^b <= |x-y|^alpha for b >= alpha on [0,1]
        if self.beta < alpha:
            return math.inf
        return abs(float(self.coef))

    def describe(self) -> dict:
        return {
            "coef": _num(self.coef),
            "beta": self.beta,
            "points": [str(p) if isinstance(p, QuadSurd) else _fmt(p) for p in self.points],
        }


def _num(c):
    return _fmt(c) if isinstance(c, Fraction) else c


def _exact_cmp_any(a, b) -> int:
    if isinstance(a, QuadSurd):
        return a.compare(b)
    if isinstance(b, QuadSurd):
        return -b.compare(a)
    return (a > b) - (a < b)


@dataclass(frozen=True)
class Composite(Potential):
    parts: tuple = ()
    terms: tuple = ()
    alpha: float = 1.0

    @classmethod
    def of(cls, *items, alpha: float | None = None) -> "Composite":
        parts, terms = [], []
        for it in items:
            if isinstance(it, Composite):
                parts.extend(it.parts)
                terms.extend(it.terms)
            elif isinstance(it, DistanceTerm):
                terms.append(it)
            else:
                parts.append(it)
        if alpha is None:
            alphas = [p.alpha for p in parts] or [t.beta for t in terms]
            alpha = min(alphas)
        return cls(tuple(parts), tuple(terms), alpha)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p in self.parts:
            out = out + p(x)
        for t in self.terms:
            out = out + t(x)
        return out

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.parts) and all(t.is_exact for t in self.terms)

    def exact(self, x):
        total = Fraction(0)
        for p in self.parts:
            total = p.exact(x) + total
        for t in self.terms:
            total = t.exact(x) + total
        return total

    @property
    def seminorm_bound(self) -> float:
        return sum(p.seminorm_bound for p in self.parts) + sum(
            t.seminorm(self.alpha) for t in self.terms
        )

    def knots(self) -> np.ndarray:
        ks = [p.knots() for p in self.parts] + [t._fpts for t in self.terms]
        ks.append(np.array([0.0, 1.0]))
        return np.unique(np.concatenate(ks))

    @property
    def knot_convex(self) -> bool:
        # -d^b is convex between points of S for b <= 1; +d^b is not
        return all(p.knot_convex for p in self.parts) and all(
            float(t.coef) <= 0 for t in self.terms
        )

    def describe(self) -> dict:
        return {
            "form": "composite",
            "alpha": self.alpha,
            "parts": [p.describe() for p in self.parts],
            "terms": [t.describe() for t in self.terms],
        }


def distance_penalty(base: Potential, points: Iterable, t, alpha: float = 1.0) -> Composite:
    """``base - t * d(., points)**alpha``."""
    # a binary float is an exact rational, so keep it exact
    t = Fraction(t)
    return Composite.of(base, DistanceTerm(-t, tuple(points), alpha), alpha=min(base.alpha, alpha))


def from_json(obj) -> Potential:
    """Build a potential from its :meth:`describe` dictionary."""
    form = obj.get("form", "piecewise_affine")
    alpha = float(obj.get("alpha", 1.0))
    if form == "piecewise_affine":
        return PiecewiseAffine(tuple((Fraction(x), Fraction(y)) for x, y in obj["points"]), alpha)
    if form == "composite":
        parts = [from_json(p) for p in obj.get("parts", [])]
        terms = []
        for t in obj.get("terms", []):
            coef = t["coef"]
            coef = Fraction(coef) if isinstance(coef, str) else float(coef)
            terms.append(DistanceTerm(coef, tuple(Fraction(p) for p in t["points"]), float(t.get("beta", 1.0))))
        return Composite(tuple(parts), tuple(terms), alpha)
    raise ValueError(f"unsupported potential form {form!r}")


def random_piecewise_affine(
    rng: np.random.Generator, n_knots: int, target_seminorm: float, alpha: float = 1.0
) -> PiecewiseAffine:
    """Piecewise-affine potential on uniform rational knots with a fixed seminorm bound.

    For ``alpha = 1`` the Lipschitz constant equals ``target_seminorm`` exactly.
    For ``alpha < 1`` the Lipschitz constant is set to the target, which bounds
    the true ``alpha``-seminorm from above.
    """
    xs = [Fraction(i, n_knots) for i in range(n_knots + 1)]
    raw = rng.uniform(-1.0, 1.0, size=n_knots + 1)
    ys = [Fraction(float(v)).limit_denominator(10**6) for v in raw]
    slopes = [abs((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])) for i in range(n_knots)]
    lip = max(slopes)
    if lip == 0:
        ys[1] += Fraction(1, 10**6)
        lip = max(abs((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])) for i in range(n_knots))
    scale = Fraction(target_seminorm).limit_denominator(10**12) / lip
    return PiecewiseAffine(tuple(zip(xs, (y * scale for y in ys))), alpha)
