"""Transport sequences: shadow an orbit by points of a rational or periodic orbit.

For a rational target ``x`` each index of the base orbit gets a point ``y_i``
of ``O~(x)``, chosen block by block:

* A: ``G^t(w)`` within ``eps`` of 0, take ``y_t = 0``;
* B: within ``eps`` of 1, take ``1, 0``;
* C: within ``eps`` of an interior point ``z`` of depth ``m``; depending on
  the side and the parity of ``m`` either ``z, G z, ..., G^m z = 0`` or
  ``z, ..., G^(m-1) z, 1, 0``;
* D: otherwise ``y_t = 0``.

Every block is the atom list of a measure in ``M_x``, so block averages of
``phi(y_i)`` never exceed ``eta``, and ``|G^i(w) - y_i|`` is controlled by
``C_x**(1/alpha) * d(G^i(w), O~(x))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..cf_core import DomainError, canonical_length, format_rational, gauss_step, parse_rational
from ..measures import candidate_set_M_x, integrate, periodic_orbit_points
from ..potentials import Potential
from .locking import locking_constants, min_gap

GUARD = 1e-12
REL_TOL = 1e-9


def float_orbit(w0: float, n: int) -> np.ndarray:
    out = np.empty(n)
    v = float(w0)
    for i in range(n):
        out[i] = v
        v = gauss_step(v)
    return out


def _dist(v: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return np.min(np.abs(v[:, None] - pts[None, :]), axis=1)


@dataclass(frozen=True)
class TransportTrace:
    base_point: float
    x: Fraction | None  # rational target
    word: tuple | None  # periodic target
    orbit: np.ndarray  # G^i(w0), one entry per y_i
    y: tuple  # Fractions for rational targets, floats for periodic ones
    labels: tuple  # "A", "B", "C", "D" or "good", "bad"
    block_starts: tuple
    alpha: float
    delta: float
    eps: float
    C_x: float
    control_exponent: float  # constant in |G^i w - y_i| <= C * d is C_x**control_exponent
    distances: np.ndarray
    errors: np.ndarray
    guard_triggers: tuple = field(default=())
    eta: float | None = None
    phi_y: np.ndarray | None = None
    steps: int = 0

    @property
    def control_constant(self) -> float:
        return self.C_x**self.control_exponent

    @property
    def control_ok(self) -> np.ndarray:
        bound = self.control_constant * self.distances
        return self.errors <= bound * (1 + REL_TOL) + GUARD

    @property
    def all_controlled(self) -> bool:
        return bool(np.all(self.control_ok))

    def block_averages(self) -> np.ndarray:
        """Running averages of ``phi(y_i)`` over every prefix that ends on a block boundary."""
        if self.phi_y is None:
            raise ValueError("trace was built without a potential")
        ends = np.array(list(self.block_starts[1:]) + [len(self.y)])
        csum = np.cumsum(self.phi_y)
        return csum[ends - 1] / ends

    def birkhoff_ok(self, slack: float = 1e-2) -> bool:
        return bool(np.all(self.block_averages() <= self.eta + slack))

    def to_json(self) -> dict:
        out = {
            "base_point": self.base_point,
            "target": format_rational(self.x) if self.x is not None else list(self.word),
            "steps": self.steps,
            "alpha": self.alpha,
            "delta": self.delta,
            "eps": self.eps,
            "C_x": self.C_x,
            "orbit": self.orbit.tolist(),
            "y": [format_rational(v) if isinstance(v, Fraction) else v for v in self.y],
            "labels": list(self.labels),
            "block_starts": list(self.block_starts),
            "distances": self.distances.tolist(),
            "errors": self.errors.tolist(),
            "control_ok": self.all_controlled,
            "guard_triggers": list(self.guard_triggers),
        }
        if self.phi_y is not None:
            out["eta"] = self.eta
            out["average"] = float(np.mean(self.phi_y))
            out["max_block_average"] = float(np.max(self.block_averages()))
        return out


def _interior_blocks(x: Fraction):
    """For each interior orbit point ``z``: its depth and the two blocks starting at ``z``."""
    out = []
    z = x
    while z != 0:
        out.append(z)
        z = gauss_step(z)
    blocks = {}
    for z in out:
        if z == 1:
            continue
        m = canonical_length(z)
        body = [z]
        for _ in range(m - 1):
            body.append(gauss_step(body[-1]))
        r_side = tuple(body) + (Fraction(0),)
        l_side = tuple(body) + (Fraction(1), Fraction(0))
        blocks[z] = (m, r_side, l_side)
    return blocks


def transport_sequence(
    w0: float, steps: int, x, alpha: float = 1.0, phi: Potential | None = None, guard: float = GUARD
) -> TransportTrace:
    """Transport sequence of the orbit of ``w0`` towards the rational point ``x``.

    The last block is completed, so the trace may run past ``steps`` by at
    most the depth of ``x`` plus one.
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if not 0 <= w0 <= 1:
        raise DomainError("base point outside [0, 1]")
    x = parse_rational(x)
    consts = locking_constants(x, alpha)
    ext = consts.extended_orbit
    ext_f = np.array([float(p) for p in ext])
    blocks = _interior_blocks(x) if 0 < x < 1 else {}
    max_block = max((len(b[2]) for b in blocks.values()), default=2)
    orbit = float_orbit(w0, steps + max_block + 1)

    y: list = []
    labels: list = []
    starts: list = []
    guards: list = []
    if x == 0:
        # O~(0) = {0} and C_x = 1: every index goes to 0
        y = [Fraction(0)] * steps
        labels = ["A"] * steps
        starts = list(range(steps))
        eps = delta = 1.0
    else:
        eps = consts.eps
        delta = consts.delta
        t = 0
        while t < steps:
            v = Fraction(orbit[t])  # exact value of the float, so case tests are exact
            starts.append(t)
            if v < eps:
                y.append(Fraction(0))
                labels.append("A")
                t += 1
                continue
            if v > 1 - eps:
                y.extend([Fraction(1), Fraction(0)])
                labels.extend(["B", "B"])
                t += 2
                continue
            hit = None
            for z in blocks:
                if abs(v - z) < eps:
                    hit = z
                    break
            if hit is None:
                y.append(Fraction(0))
                labels.append("D")
                t += 1
                continue
            m, r_side, l_side = blocks[hit]
            diff = v - hit
            if abs(diff) < guard:
                # side is ambiguous in floating point: read it off the orbit itself
                use_r = orbit[t + m] < 0.5
                guards.append(t)
            elif m % 2 == 1:
                use_r = diff <= 0
            else:
                use_r = diff >= 0
            body = r_side if use_r else l_side
            y.extend(body)
            labels.extend(["C"] * len(body))
            t += len(body)
        eps = float(eps)
        delta = float(delta)

    n = len(y)
    orb = orbit[:n]
    dist = _dist(orb, ext_f)
    err = np.abs(orb - np.array([float(v) for v in y]))
    eta = phi_y = None
    if phi is not None:
        eta = max(float(integrate(c.measure, phi)) for c in candidate_set_M_x(x))
        phi_y = phi(np.array([float(v) for v in y]))
    return TransportTrace(
        float(w0), x, None, orb, tuple(y), tuple(labels), tuple(starts), alpha, delta, eps,
        consts.C_x, 1.0 / alpha, dist, err, tuple(guards), eta, phi_y, steps,
    )


# ---------------------------------------------------------------------------
# periodic targets


def _branch_gaps(y: float) -> float:
    """Distance from ``y`` to the nearest discontinuity ``1/k`` of the Gauss map."""
    if y <= 0:
        return 0.0
    k = math.floor(1.0 / y)
    lo = 1.0 / (k + 1)
    hi = 1.0 / k if k >= 1 else math.inf
    return min(y - lo, hi - y)


def periodic_radius(points: list[float], delta: float) -> float:
    """A radius ``eps`` such that ``|x - y| < eps`` keeps ``p`` iterates within ``delta / 2``.

    Works backwards along the orbit: on ``[y - r, y + r]`` with ``r <= y/2``
    and no discontinuity inside, ``|G'| <= 4 / y**2``.
    """
    p = len(points)
    best = math.inf
    for j in range(p):
        r = 0.99 * delta / 2
        for i in range(p - 2, -1, -1):
            yi = points[(j + i) % p]
            r = min(r * yi * yi / 4, yi / 2, 0.5 * _branch_gaps(yi), 0.99 * delta / 2)
        best = min(best, r)
    return best


def periodic_transport(
    w0: float, steps: int, word, alpha: float = 1.0, phi: Potential | None = None
) -> TransportTrace:
    """Good/bad transport sequence of the orbit of ``w0`` towards the periodic orbit of ``word``.

    A time ``i + 1`` within ``eps`` of the orbit starts ``p`` good times
    shadowed by consecutive orbit points. Any other time is bad and copies
    the successor of the point used at the previous bad time.
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    word = tuple(int(a) for a in word)
    exact_pts = periodic_orbit_points(word)
    pts = [float(p) for p in exact_pts]
    p = len(pts)
    pts_a = np.array(pts)
    delta = float(min_gap(exact_pts)) if p > 1 else 1.0
    eps = periodic_radius(pts, delta)
    C = 1.0 / eps
    orbit = float_orbit(w0, steps + p + 1)
    y: list = []
    labels: list = []
    starts: list = []
    last_bad = 0  # index of y_{-1}, a bad time
    t = 0
    while t < steps:
        v = orbit[t]
        d = np.abs(pts_a - v)
        j = int(np.argmin(d))
        starts.append(t)
        if d[j] < eps:
            for i in range(p):
                y.append(pts[(j + i) % p])
                labels.append("good")
            t += p
        else:
            last_bad = (last_bad + 1) % p
            y.append(pts[last_bad])
            labels.append("bad")
            t += 1
    n = len(y)
    orb = orbit[:n]
    dist = _dist(orb, pts_a)
    err = np.abs(orb - np.array(y))
    eta = phi_y = None
    if phi is not None:
        eta = float(np.mean(phi(pts_a)))
        phi_y = phi(np.array(y))
    return TransportTrace(
        float(w0), None, word, orb, tuple(y), tuple(labels), tuple(starts), alpha, delta, eps,
        C, 1.0, dist, err, (), eta, phi_y, steps,
    )


__all__ = ["TransportTrace", "transport_sequence", "periodic_transport", "periodic_radius", "float_orbit"]
