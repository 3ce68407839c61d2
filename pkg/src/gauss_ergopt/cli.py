"""``ergopt`` command line.

Exit codes: 0 when every internal check passed, 1 when a check failed,
2 on a convergence failure, 3 when a budget was exceeded, 64 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import io
from ._backend import BACKEND
from .bousch import ConvergenceError, calibrated_subaction, drift_q_estimate, revealed_potential
from .cf_core import (
    DomainError,
    as_word,
    cf_expand,
    continuants,
    cylinder,
    format_rational,
    is_primitive,
    parse_rational,
    periodic_point,
)
from .ergopt.classify import Budgets, classify
from .ergopt.cycles import BudgetExceeded, restricted_sup_cycle_bound
from .ergopt.example76 import example_7_6
from .ergopt.locking import locking_experiment
from .ergopt.search import global_sup_estimate
from .ergopt.transport import periodic_transport, transport_sequence
from .measures import (
    DiscreteMeasure,
    UnsupportedInput,
    candidate_set_M_x,
    closure_membership,
    fcf_measure,
    periodic_orbit_points,
)
from .potentials import Potential, constant, distance_penalty, example_76, from_json, identity, neg_x

EXIT_OK, EXIT_CHECK, EXIT_CONVERGENCE, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    grid_size: int = 8192
    branch_cutoff: int = 64
    tail_tol: float = 1e-9
    window: int = 16
    max_iters: int = 5000
    tol: float = 1e-6
    m_max: int = 8
    max_period: int = 5
    max_digit: int = 8
    max_len: int = 6
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        for name in ("grid_size", "branch_cutoff", "window", "max_iters", "m_max", "max_period",
                     "max_digit", "max_len"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        for name in ("tail_tol", "tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name.replace('_', '-')} must be > 0")
        if self.output_format not in ("json", "csv"):
            raise UsageError("format must be json or csv")

    @classmethod
    def from_args(cls, ns: argparse.Namespace, **defaults) -> "RunConfig":
        vals = {}
        for name in cls.__dataclass_fields__:
            v = getattr(ns, name, None)
            if v is not None:
                vals[name] = v
            elif name in defaults:
                vals[name] = defaults[name]
        return cls(**vals)


# ---------------------------------------------------------------------------
# potentials


def parse_potential(spec: str, alpha: float = 1.0) -> Potential:
    """``example76``, ``neg_x``, ``x``, ``const:c``, ``dist:word:t``, inline JSON or ``@file.json``."""
    s = spec.strip()
    if s == "example76":
        return example_76()
    if s == "neg_x":
        return neg_x()
    if s in ("x", "identity"):
        return identity()
    try:
        if s.startswith("const:"):
            return constant(parse_rational(s[6:]))
        if s.startswith("dist:"):
            _, word, t = s.split(":")
            w = as_word(word)
            if not is_primitive(w):
                raise UsageError(f"{word} is not a primitive word")
            return distance_penalty(constant(0), periodic_orbit_points(w), parse_rational(t), alpha)
        if s.startswith("{") or s.startswith("@"):
            return from_json(io.read_json(s))
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"bad potential {spec!r}: {exc}") from exc
    raise UsageError(f"unknown potential {spec!r}")


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def emit(self, summary: str, payload: dict, csv_text: str | None = None) -> None:
        if self.cfg.output_format == "csv":
            if csv_text is None:
                raise UsageError("this command has no CSV output")
            text = csv_text
        else:
            text = io.to_json_text(payload)
        if self.cfg.output_path:
            io.write_text(text, self.cfg.output_path)
            print(summary)
        else:
            sys.stdout.write(text)
            print(summary, file=sys.stderr)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    return repr(v)


# ---------------------------------------------------------------------------
# commands


def cmd_cf(ns, cfg: RunConfig) -> int:
    out = Output(cfg)
    try:
        if ns.action == "expand":
            x = parse_rational(ns.value)
            e = cf_expand(x)
            payload = {
                "x": format_rational(x),
                "canonical": list(e.canonical),
                "alternative": None if e.alternative is None else list(e.alternative),
                "boundary": e.boundary,
            }
            summary = f"cf expand {payload['x']} canonical={payload['canonical']} alternative={payload['alternative']}"
        else:
            w = as_word(ns.value)
            if ns.action == "periodic":
                p = periodic_point(w)
                payload = {"word": list(w), "value": float(p), "surd": str(p)}
                summary = f"cf periodic {list(w)} value={payload['value']!r} surd={payload['surd']}"
            elif ns.action == "cylinder":
                c = cylinder(w)
                payload = {"word": list(w), "lo": format_rational(c.lo), "hi": format_rational(c.hi),
                           "diameter": format_rational(c.diameter)}
                summary = f"cf cylinder {list(w)} lo={payload['lo']} hi={payload['hi']} diam={payload['diameter']}"
            else:
                c = continuants(w)
                payload = {"word": list(w), "p": list(c.p), "q": list(c.q)}
                summary = f"cf continuants {list(w)} p_n={c.p[-1]} q_n={c.q[-1]}"
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    out.emit(summary, payload)
    return EXIT_OK


def _parse_measure(text: str) -> DiscreteMeasure:
    try:
        data = io.read_json(text)
    except (json.JSONDecodeError, OSError) as exc:
        raise UsageError(f"measure is not valid JSON: {exc}") from exc
    try:
        return DiscreteMeasure.from_json(data)
    except UnsupportedInput:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad measure: {exc}") from exc


def cmd_measure(ns, cfg: RunConfig) -> int:
    out = Output(cfg)
    if ns.action == "member":
        mu = _parse_measure(ns.value)
        cert = closure_membership(mu)
        payload = {"measure": mu.to_json(), "certificate": cert.to_json()}
        if cert.is_member:
            parts = ", ".join(f"{_fmt(c)}*mu{list(w)}" for w, c in cert.components)
            summary = f"measure member verdict=member delta0={_fmt(cert.delta0)} decomposition=[{parts}]"
        else:
            summary = f"measure member verdict=non_member violated={cert.violated_condition.condition}"
    elif ns.action == "mx":
        try:
            cs = candidate_set_M_x(ns.value)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        payload = {
            "x": format_rational(cs.x),
            "extended_orbit": [format_rational(p) for p in cs.extended_orbit],
            "candidates": [{"label": c.label, "measure": c.measure.to_json()} for c in cs],
        }
        summary = f"measure mx {payload['x']} count={len(cs)} candidates={[c.label for c in cs]}"
    else:
        try:
            fm = fcf_measure(ns.value)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        payload = {"word": list(fm.word), "label": fm.label(), "measure": fm.measure.to_json()}
        summary = f"measure fcf {fm.label()} atoms={len(fm.atoms)}"
    out.emit(summary, payload)
    return EXIT_OK


def cmd_bousch(ns, cfg: RunConfig) -> int:
    phi = parse_potential(ns.potential, ns.alpha)
    drift = None
    if ns.q is None:
        drift = drift_q_estimate(phi, ns.drift_iters, min(cfg.grid_size, 4096), cfg.branch_cutoff, cfg.tail_tol)
        q = drift.q_mid
    else:
        q = float(parse_rational(ns.q))
    res = calibrated_subaction(phi, q, cfg.grid_size, cfg.window, cfg.max_iters, cfg.tol,
                               cfg.branch_cutoff, cfg.tail_tol)
    rev = revealed_potential(phi, q, res.u)
    payload = {
        "potential": phi.describe(),
        "config": {"grid": cfg.grid_size, "window": cfg.window, "max_iters": cfg.max_iters,
                   "tol": cfg.tol, "branch_cutoff": cfg.branch_cutoff, "tail_tol": cfg.tail_tol},
        "q": q,
        "drift": None if drift is None else drift.to_json(),
        "result": res.to_json(),
        "revealed_max": rev.max_value,
    }
    ok = res.sup_norm_bound_check and res.seminorm_bound_check
    summary = (f"bousch q={q!r} residual={res.residual!r} iterations={res.iterations} "
               f"sup_norm={res.sup_norm!r} revealed_max={rev.max_value!r}")
    Output(cfg).emit(summary, payload, io.grid_csv_text(res.u.nodes, res.u.values))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_ergsup(ns, cfg: RunConfig) -> int:
    phi = parse_potential(ns.potential, ns.alpha)
    est = global_sup_estimate(phi, cfg.m_max, cfg.max_period, cfg.max_digit, cfg.max_len)
    rows = []
    status = EXIT_OK
    for r in est.sweep:
        upper = None
        if ns.depth:
            try:
                upper = restricted_sup_cycle_bound(phi, r.m, ns.depth, ns.edge_budget).value
            except BudgetExceeded as exc:
                print(f"budget exceeded at m={r.m}: {exc} (partial depth {exc.partial_depth})", file=sys.stderr)
                status = EXIT_BUDGET
            if upper is not None and r.best_value > upper + 1e-9:
                status = EXIT_CHECK
        rows.append((r.m, r.best_value, upper))
    payload = est.to_json()
    payload["m_sweep"] = [{"m": m, "Q_m_lower": lo, "Q_m_upper": hi} for m, lo, hi in rows]
    summary = f"ergsup q_star={est.q_star!r} side={est.side} invariant={est.invariant_witness} fcf={est.fcf_witness}"
    Output(cfg).emit(summary, payload, io.sweep_csv_text(rows))
    return status


def _budgets(ns, cfg: RunConfig) -> Budgets:
    return Budgets(cfg.m_max, cfg.max_period, cfg.max_digit, cfg.max_len, edge_budget=ns.edge_budget)


def cmd_classify(ns, cfg: RunConfig) -> int:
    phi = parse_potential(ns.potential, ns.alpha)
    cls = classify(phi, _budgets(ns, cfg))
    payload = cls.to_json()
    rows = [(m, q, None) for m, q in cls.sweep]
    summary = f"classify verdict={cls.verdict} attaining={list(cls.attaining)}"
    Output(cfg).emit(summary, payload, io.sweep_csv_text(rows))
    return EXIT_OK


def cmd_lock(ns, cfg: RunConfig) -> int:
    phi = parse_potential(ns.potential, ns.alpha)
    try:
        t = float(parse_rational(ns.t))
        s = None if ns.s is None else float(parse_rational(ns.s))
        rep = locking_experiment(phi, ns.x, t, ns.trials, cfg.seed, s, ns.scale, ns.knots)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    payload = rep.to_json()
    summary = (f"lock baseline={rep.baseline} fraction_unchanged={rep.fraction_unchanged!r} "
               f"C_x={rep.constants.C_x!r} seed={rep.seed}")
    Output(cfg).emit(summary, payload)
    return EXIT_OK if rep.fraction_unchanged == 1.0 or ns.scale >= 1 else EXIT_CHECK


def cmd_transport(ns, cfg: RunConfig) -> int:
    phi = parse_potential(ns.potential, ns.alpha)
    try:
        if ns.word:
            w = as_word(ns.word)
            if not is_primitive(w):
                raise UsageError(f"{ns.word} is not a primitive word")
            tr = periodic_transport(ns.w0, ns.steps, w, ns.alpha, phi)
        else:
            tr = transport_sequence(ns.w0, ns.steps, ns.x, ns.alpha, phi)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    payload = tr.to_json()
    controlled = tr.all_controlled
    summary = (f"transport steps={len(tr.y)} controlled={controlled} eta={tr.eta!r} "
               f"average={payload['average']!r} C_x={tr.C_x!r}")
    Output(cfg).emit(summary, payload)
    ok = controlled and (ns.word is not None or tr.birkhoff_ok(ns.slack))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_example(ns, cfg: RunConfig) -> int:
    rep = example_7_6(cfg.m_max, cfg.max_period, cfg.max_digit, cfg.max_len, cfg.tol)
    payload = rep.to_json()
    failed = [c.name for c in rep.failed()]
    summary = f"example76 all_passed={rep.all_passed} checks={len(rep.checks)} failed={failed}"
    Output(cfg).emit(summary, payload, io.sweep_csv_text(rep.sweep))
    return EXIT_OK if rep.all_passed else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--grid", dest="grid_size", type=int)
    g.add_argument("--branch-cutoff", type=int)
    g.add_argument("--tail-tol", type=float)
    g.add_argument("--window", type=int)
    g.add_argument("--max-iters", type=int)
    g.add_argument("--tol", type=float)
    g.add_argument("--m-max", type=int)
    g.add_argument("--max-period", type=int)
    g.add_argument("--max-digit", type=int)
    g.add_argument("--max-len", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--format", dest="output_format", choices=("json", "csv"))
    g.add_argument("--output", "-o", dest="output_path")


def _potential(p: argparse.ArgumentParser, default: str = "example76") -> None:
    p.add_argument("--potential", default=default,
                   help="example76, neg_x, x, const:c, dist:word:t, inline JSON or @file")
    p.add_argument("--alpha", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ergopt", description="Ergodic optimization for the Gauss map.")
    parser.add_argument("--version", action="version", version=f"%(prog)s ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cf", help="continued fractions")
    p.add_argument("action", choices=("expand", "periodic", "cylinder", "continuants"))
    p.add_argument("value")
    _common(p)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("measure", help="FCF measures, membership, candidate sets")
    p.add_argument("action", choices=("member", "mx", "fcf"))
    p.add_argument("value", help="JSON atoms (or @file), a rational, or a word")
    _common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("bousch", help="calibrated sub-action")
    _potential(p)
    p.add_argument("--q", help="ergodic supremum; estimated by drift when omitted")
    p.add_argument("--drift-iters", type=int, default=200)
    _common(p)
    p.set_defaults(func=cmd_bousch)

    p = sub.add_parser("ergsup", help="global supremum estimate and m-sweep")
    _potential(p)
    p.add_argument("--depth", type=int, default=0, help="also compute cycle upper bounds at this depth")
    p.add_argument("--edge-budget", type=int, default=4_000_000)
    _common(p)
    p.set_defaults(func=cmd_ergsup)

    p = sub.add_parser("classify", help="heuristic classification")
    _potential(p)
    p.add_argument("--edge-budget", type=int, default=4_000_000)
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("lock", help="locking experiment")
    _potential(p)
    p.add_argument("--x", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--s", default=None, help="weight of the first-stage orbit penalty")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--scale", type=float, default=0.9)
    p.add_argument("--knots", type=int, default=8)
    _common(p)
    p.set_defaults(func=cmd_lock)

    p = sub.add_parser("transport", help="transport sequence")
    _potential(p)
    p.add_argument("--w0", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    tgt = p.add_mutually_exclusive_group(required=True)
    tgt.add_argument("--x", help="rational target")
    tgt.add_argument("--word", help="periodic target word")
    p.add_argument("--slack", type=float, default=1e-2)
    _common(p)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("example76", help="checks for the built-in example76 potential")
    _common(p)
    p.set_defaults(func=cmd_example)
    return parser


_DEFAULTS = {
    "example76": {"m_max": 20, "tol": 1e-2},
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns, **_DEFAULTS.get(ns.command, {}))
        return ns.func(ns, cfg)
    except (UsageError, UnsupportedInput) as exc:
        print(f"ergopt {ns.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        diag = {"error": "convergence", "message": str(exc), "residual": exc.residual,
                "iterations": exc.iterations}
        sys.stdout.write(io.to_json_text(diag))
        return EXIT_CONVERGENCE
    except BudgetExceeded as exc:
        diag = {"error": "budget", "message": str(exc), "partial_depth": exc.partial_depth}
        sys.stdout.write(io.to_json_text(diag))
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
