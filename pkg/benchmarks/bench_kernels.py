"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from gauss_ergopt import _fallback

try:
    from gauss_ergopt import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    words, lens = _fallback.lyndon_words(12, 5)
    w5 = words[lens == 5, :5]
    n, A = 8193, 64
    u = rng.standard_normal(n)
    idx = rng.integers(0, n - 1, size=(n, A))
    wt = rng.random((n, A))
    psi = rng.standard_normal((n, A))
    nodes, deg = 5**7, 5
    weights = rng.standard_normal((nodes, deg))
    succ = rng.integers(0, nodes, size=(nodes, deg))
    x = rng.standard_normal(nodes)
    return [
        ("lyndon_words(m=12, P=5)", lambda k: k.lyndon_words(12, 5)),
        (f"periodic_orbit_points({len(w5)} x 5)", lambda k: k.periodic_orbit_points(w5)),
        (f"bousch_max({n} x {A})", lambda k: k.bousch_max(u, idx, wt, psi, -1.0)),
        (f"max_plus_matvec({nodes} x {deg})", lambda k: k.max_plus_matvec(weights, succ, x)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, call in cases():
        t_py = best_of(lambda: call(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:40s} {t_py:10.4f} {'n/a':>10s}")
            continue
        t_c = best_of(lambda: call(_kernels), args.repeat)
        print(f"{name:40s} {t_py:10.4f} {t_c:10.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
