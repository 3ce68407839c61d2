"""Finitely supported probability measures on [0, 1].

Weights are exact Fractions. Points are Fractions for rational orbits and
:class:`~gauss_ergopt.surd.QuadSurd` for periodic orbits.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cf_core import (
    DomainError,
    Word,
    as_word,
    canonical_length,
    cf_expand,
    eval_cf,
    f_map,
    format_rational,
    gauss_step,
    in_class_A,
    is_primitive,
    parse_rational,
    periodic_point,
)
from .potentials import NotExact, Potential
from .surd import QuadSurd


class UnsupportedInput(ValueError):
    """Input outside the finitely checkable part of the theory."""


def _cmp_points(a, b) -> int:
    if isinstance(a, QuadSurd):
        return a.compare(b)
    if isinstance(b, QuadSurd):
        return -b.compare(a)
    return (a > b) - (a < b)


_point_key = functools.cmp_to_key(_cmp_points)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms and exact weights."""

    atoms: tuple  # ((point, weight), ...) sorted by point

    def __post_init__(self):
        merged: dict = {}
        for p, w in self.atoms:
            if not isinstance(p, QuadSurd):
                p = Fraction(p)
            w = Fraction(w)
            if w < 0:
                raise ValueError("negative weight")
            if w == 0:
                continue
            merged[p] = merged.get(p, Fraction(0)) + w
        if sum(merged.values()) != 1:
            raise ValueError(f"weights sum to {sum(merged.values())}, not 1")
        for p in merged:
            if _cmp_points(p, Fraction(0)) < 0 or _cmp_points(p, Fraction(1)) > 0:
                raise ValueError(f"atom {p} outside [0, 1]")
        atoms = tuple(sorted(merged.items(), key=lambda pw: _point_key(pw[0])))
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def dirac(cls, p) -> "DiscreteMeasure":
        return cls(((p, 1),))

    @classmethod
    def uniform(cls, points: Iterable) -> "DiscreteMeasure":
        pts = list(points)
        w = Fraction(1, len(pts))
        return cls(tuple((p, w) for p in pts))

    @classmethod
    def combine(cls, parts: Iterable[tuple]) -> "DiscreteMeasure":
        """Convex combination of ``(coefficient, measure)`` pairs."""
        atoms = []
        for c, mu in parts:
            c = Fraction(c)
            atoms.extend((p, c * w) for p, w in mu.atoms)
        return cls(tuple(atoms))

    @property
    def points(self) -> list:
        return [p for p, _ in self.atoms]

    @property
    def weights(self) -> list[Fraction]:
        return [w for _, w in self.atoms]

    @property
    def is_rational(self) -> bool:
        return all(not isinstance(p, QuadSurd) for p, _ in self.atoms)

    def mass(self, p) -> Fraction:
        for q, w in self.atoms:
            if _cmp_points(p, q) == 0:
                return w
        return Fraction(0)

    def mass_where(self, pred) -> Fraction:
        return sum((w for p, w in self.atoms if pred(p)), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self.atoms)

    def float_points(self) -> np.ndarray:
        return np.array([float(p) for p in self.points])

    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def to_json(self) -> list[dict]:
        return [{"point": _fmt_point(p), "weight": format_rational(w)} for p, w in self.atoms]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "DiscreteMeasure":
        atoms = []
        for item in data:
            try:
                point = parse_rational(item["point"])
            except DomainError as exc:
                raise UnsupportedInput(
                    f"atom {item['point']!r} is not a rational number; only rational atoms are supported"
                ) from exc
            atoms.append((point, parse_rational(item["weight"])))
        return cls(tuple(atoms))

    def __str__(self) -> str:
        return " + ".join(f"{format_rational(w)}*d[{_fmt_point(p)}]" for p, w in self.atoms)


def _fmt_point(p) -> str:
    return str(p) if isinstance(p, QuadSurd) else format_rational(p)


DELTA0 = DiscreteMeasure.dirac(0)
DELTA1 = DiscreteMeasure.dirac(1)


# ---------------------------------------------------------------------------
# rational orbits and FCF measures


@dataclass(frozen=True)
class RationalOrbit:
    word: Word
    points: tuple  # p_0 = 0, p_k = [a_{n-k+1}, ..., a_n]

    @property
    def length(self) -> int:
        return len(self.points)


def rational_orbit(w) -> RationalOrbit:
    w = as_word(w)
    if not w:
        raise DomainError("empty word")
    pts = [Fraction(0)] + [eval_cf(w[len(w) - k:]) for k in range(1, len(w) + 1)]
    if len(set(pts)) != len(pts):
        raise AssertionError(f"orbit points of {w} are not distinct")
    return RationalOrbit(w, tuple(pts))


@dataclass(frozen=True)
class FCFMeasure:
    """Uniform measure on the rational orbit of a finite word."""

    word: Word
    measure: DiscreteMeasure

    @property
    def length(self) -> int:
        return len(self.word) + 1

    @property
    def atoms(self):
        return self.measure.atoms

    def label(self) -> str:
        return "mu" + str(self.word).replace(" ", "")


def fcf_measure(w) -> FCFMeasure:
    return _fcf_measure(as_word(w))


@functools.lru_cache(maxsize=65536)
def _fcf_measure(w: Word) -> FCFMeasure:
    return FCFMeasure(w, DiscreteMeasure.uniform(rational_orbit(w).points))


def periodic_orbit_points(w) -> list[QuadSurd]:
    """Exact points of the G-orbit of ``[overline(w)]``, in orbit order."""
    w = as_word(w)
    x = periodic_point(w)
    pts = [x]
    for _ in range(len(w) - 1):
        x = gauss_step(x)
        pts.append(x)
    return pts


def periodic_measure(w) -> DiscreteMeasure:
    w = as_word(w)
    if not is_primitive(w):
        raise DomainError(f"{w} is a proper power; its orbit has fewer than {len(w)} points")
    return DiscreteMeasure.uniform(periodic_orbit_points(w))


def _measure_of(mu) -> DiscreteMeasure:
    if isinstance(mu, FCFMeasure):
        return mu.measure
    return mu


def integrate(mu, phi: Potential, exact: bool | None = None):
    """``sum weight * phi(point)``.

    Exact (Fraction or QuadSurd) when ``phi`` is exact at every atom, float
    otherwise. Pass ``exact=False`` to force the float path.
    """
    mu = _measure_of(mu)
    if exact is None:
        exact = phi.is_exact
    if exact:
        try:
            total = Fraction(0)
            for p, w in mu.atoms:
                total = phi.exact(p) * w + total
            return total
        except NotExact:
            pass
    return float(np.dot(mu.float_weights(), phi(mu.float_points())))


def alt_form_identity_check(w) -> bool:
    """Check ``(l+1) mu_f(w) = l mu_w + delta_1`` as measures, exactly."""
    w = as_word(w)
    if not in_class_A(w):
        raise DomainError(f"{w} is not in class A")
    l = len(w) + 1
    lhs = {p: (l + 1) * m for p, m in fcf_measure(f_map(w)).atoms}
    rhs: dict = {}
    for p, m in fcf_measure(w).atoms:
        rhs[p] = rhs.get(p, 0) + l * m
    rhs[Fraction(1)] = rhs.get(Fraction(1), 0) + 1
    return lhs == rhs


# ---------------------------------------------------------------------------
# membership in the closure of invariant measures


def in_R1(p: Fraction) -> bool:
    p = Fraction(p)
    return p.numerator == 1 and p.denominator >= 2


@dataclass(frozen=True)
class Violation:
    condition: str  # mass_at_1 | mass_R1 | preimage
    point: Fraction | None
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "point": None if self.point is None else format_rational(self.point),
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
        }


@dataclass(frozen=True)
class MembershipCertificate:
    verdict: str  # member | non_member
    r1: Fraction = Fraction(0)
    delta0: Fraction = Fraction(0)
    components: tuple = ()  # ((word, coefficient), ...) sorted by word
    violations: tuple = ()

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"

    @property
    def violated_condition(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def recombine(self) -> DiscreteMeasure:
        parts = [(c, fcf_measure(w).measure) for w, c in self.components]
        if self.delta0:
            parts.append((self.delta0, DELTA0))
        return DiscreteMeasure.combine(parts)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict}
        if self.is_member:
            out["r1"] = format_rational(self.r1)
            out["delta0"] = format_rational(self.delta0)
            out["decomposition"] = [
                {"word": list(w), "coefficient": format_rational(c)} for w, c in self.components
            ]
        else:
            out["violated_condition"] = self.violations[0].condition
            out["violations"] = [v.to_json() for v in self.violations]
        return out


def membership_violations(mu: DiscreteMeasure) -> list[Violation]:
    """Violated membership conditions, most basic first."""
    if not mu.is_rational:
        raise UnsupportedInput("membership is decided only for measures with rational atoms")
    m = mu.as_dict()
    m0 = m.get(Fraction(0), Fraction(0))
    m1 = m.get(Fraction(1), Fraction(0))
    out = []
    if m0 < m1:
        out.append(Violation("mass_at_1", Fraction(1), m0, m1))
    mR1 = sum((w for p, w in m.items() if in_R1(p)), Fraction(0))
    if m0 < mR1:
        out.append(Violation("mass_R1", None, m0, mR1))
    pre: dict = {}
    for y, w in m.items():
        gy = gauss_step(y)
        if 0 < gy < 1:
            pre[gy] = pre.get(gy, Fraction(0)) + w
    for x in sorted(pre):
        if m.get(x, Fraction(0)) < pre[x]:
            out.append(Violation("preimage", x, m.get(x, Fraction(0)), pre[x]))
    return out


def _preimage_mass(m: Mapping, x: Fraction) -> Fraction:
    return sum((w for y, w in m.items() if 0 < y < 1 and gauss_step(y) == x), Fraction(0))


def closure_membership(mu) -> MembershipCertificate:
    """Decide membership and, for members, build an explicit decomposition.

    A member is written as ``delta0 * d_0 + sum_w c_w * mu_w`` with FCF
    measures ``mu_w``; the recombination reproduces ``mu`` exactly.
    """
    mu = _measure_of(mu)
    viol = membership_violations(mu)
    if viol:
        return MembershipCertificate("non_member", violations=tuple(viol))

    m = mu.as_dict()
    r = m.get(Fraction(1), Fraction(0))
    nu = {p: w / (1 - r) for p, w in m.items() if p != 1}
    nu0 = nu.get(Fraction(0), Fraction(0))

    # nu = r0 * delta_0 + sum_x c_x * mu_{canonical(x)}
    r0 = nu0 - sum((w for p, w in nu.items() if in_R1(p)), Fraction(0))
    support = set(p for p in nu if 0 < p < 1)
    support |= set(gauss_step(p) for p in nu if 0 < p < 1)
    support = sorted(x for x in support if 0 < x < 1)
    comps: dict = {}
    for x in support:
        depth = canonical_length(x)
        c = (depth + 1) * (nu.get(x, Fraction(0)) - _preimage_mass(nu, x))
        assert c >= 0
        if c:
            comps[cf_expand(x).canonical] = c

    final: dict = {}
    if r == 0:
        delta0 = r0
        final = dict(comps)
    else:
        lam = r / ((1 - r) * nu0)
        assert 0 < lam <= 1
        delta0 = (1 - lam) * (1 - r) * r0
        for w, c in comps.items():
            _acc(final, w, (1 - lam) * (1 - r) * c)
            l = len(w) + 1
            _acc(final, f_map(w), (r / nu0) * c * Fraction(l + 1, l))
        _acc(final, (1,), 2 * r * r0 / nu0)
    components = tuple(sorted((w, c) for w, c in final.items() if c))
    cert = MembershipCertificate("member", r1=r, delta0=delta0, components=components)
    if cert.recombine() != mu:
        raise AssertionError("decomposition does not recombine to the input measure")
    return cert


def _acc(d: dict, k, v) -> None:
    d[k] = d.get(k, Fraction(0)) + v


# ---------------------------------------------------------------------------
# candidate measures attached to a rational point


@dataclass(frozen=True)
class Candidate:
    label: str
    word: Word | None  # None for delta_0
    measure: DiscreteMeasure


@dataclass(frozen=True)
class CandidateSet:
    x: Fraction
    candidates: tuple
    orbit: tuple  # forward orbit down to 0
    extended_orbit: tuple  # sorted; see extended_orbit()

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)


def _delta0_candidate() -> Candidate:
    return Candidate("delta0", None, DELTA0)


def forward_orbit(x: Fraction) -> tuple:
    x = Fraction(x)
    pts = [x]
    while pts[-1] != 0:
        pts.append(gauss_step(pts[-1]))
    return tuple(pts)


def extended_orbit(x) -> tuple:
    """``{0}`` for ``x = 0``; otherwise the forward orbit of ``x`` together with 0 and 1."""
    x = Fraction(x)
    if x == 0:
        return (Fraction(0),)
    return tuple(sorted(set(forward_orbit(x)) | {Fraction(0), Fraction(1)}))


def candidate_set_M_x(x) -> CandidateSet:
    """``M_x``: the FCF measures built from suffixes of both expansions of ``x``, and ``delta_0``."""
    if isinstance(x, (float, QuadSurd)):
        raise DomainError("candidate sets are defined for rational points only")
    x = parse_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} outside [0, 1]")
    orbit = forward_orbit(x)
    ext = extended_orbit(x)
    if x == 0:
        return CandidateSet(x, (_delta0_candidate(),), orbit, ext)
    if x == 1:
        c1 = fcf_measure((1,))
        return CandidateSet(x, (_delta0_candidate(), Candidate(c1.label(), (1,), c1.measure)), orbit, ext)
    a = cf_expand(x).canonical
    b = f_map(a)
    cands: list[Candidate] = []
    seen: list[DiscreteMeasure] = []
    words = [a[i:] for i in range(len(a))] + [b[i:] for i in range(len(b))]
    for w in words:
        fm = fcf_measure(w)
        if fm.measure in seen:
            continue
        seen.append(fm.measure)
        cands.append(Candidate(fm.label(), w, fm.measure))
    if DELTA0 not in seen:
        cands.append(_delta0_candidate())
    return CandidateSet(x, tuple(cands), orbit, ext)
