import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from gauss_ergopt import _backend, _fallback
from gauss_ergopt.cf_core import is_primitive

from . import oracles

try:
    from gauss_ergopt import _kernels
except ImportError:  # extension not built
    _kernels = None

IMPLS = [_fallback] + ([_kernels] if _kernels is not None else [])


def _lyndon_set(impl, m, L):
    words, lens = impl.lyndon_words(m, L)
    return {tuple(int(a) for a in row[:n]) for row, n in zip(words, lens)}


def _brute_lyndon(m, L):
    out = set()
    for n in range(1, L + 1):
        for w in itertools.product(range(1, m + 1), repeat=n):
            if is_primitive(w) and w == min(w[i:] + w[:i] for i in range(n)):
                out.add(w)
    return out


@pytest.mark.parametrize("impl", IMPLS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
def test_lyndon_words(impl):
    assert _lyndon_set(impl, 3, 5) == _brute_lyndon(3, 5)


@pytest.mark.parametrize("impl", IMPLS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
def test_periodic_orbit_points(impl):
    words = np.array([[1, 2, 3], [2, 2, 1], [4, 1, 1]], dtype=np.int64)
    pts = impl.periodic_orbit_points(words)
    for row, got in zip(words.tolist(), pts):
        assert got == pytest.approx(oracles.periodic_orbit_floats(row), abs=1e-13)


def _bousch_case(seed=0, n=257, A=9):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(n)
    idx = rng.integers(0, n - 1, size=(n, A)).astype(np.int64)
    wt = rng.random((n, A))
    psi = rng.standard_normal((n, A))
    return u, idx, wt, psi


def test_bousch_max_reference():
    u, idx, wt, psi = _bousch_case()
    vals, arg = _fallback.bousch_max(u, idx, wt, psi, -0.5)
    g = u[idx] * (1 - wt) + u[idx + 1] * wt + psi
    assert np.allclose(vals, np.maximum(g.max(axis=1), -0.5))


@pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")
def test_compiled_matches_fallback():
    u, idx, wt, psi = _bousch_case(3)
    a = _fallback.bousch_max(u, idx, wt, psi, 0.1)
    b = _kernels.bousch_max(u, idx, wt, psi, 0.1)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    rng = np.random.default_rng(4)
    w = rng.standard_normal((64, 4))
    succ = rng.integers(0, 64, size=(64, 4)).astype(np.int64)
    x = rng.standard_normal(64)
    ya, ja = _fallback.max_plus_matvec(w, succ, x)
    yb, jb = _kernels.max_plus_matvec(w, succ, x)
    assert np.array_equal(ya, yb) and np.array_equal(ja, jb)
    assert _lyndon_set(_kernels, 4, 6) == _lyndon_set(_fallback, 4, 6)


def test_max_plus_matvec_reference():
    rng = np.random.default_rng(1)
    w = rng.standard_normal((10, 3))
    succ = rng.integers(0, 10, size=(10, 3)).astype(np.int64)
    x = rng.standard_normal(10)
    y, j = _fallback.max_plus_matvec(w, succ, x)
    assert np.allclose(y, (w + x[succ]).max(axis=1))


def test_pure_env_selects_fallback():
    env = dict(os.environ, GAUSS_ERGOPT_PURE="1")
    r = subprocess.run([sys.executable, "-c", "from gauss_ergopt import _backend; print(_backend.BACKEND)"],
                       capture_output=True, text=True, env=env, check=True)
    assert r.stdout.strip() == "python"


def test_backend_reported():
    assert _backend.BACKEND in ("python", "cython")
    if _kernels is not None and os.environ.get("GAUSS_ERGOPT_PURE") is None:
        assert _backend.BACKEND == "cython"


def test_threads_env(monkeypatch):
    monkeypatch.setenv("ERGOPT_THREADS", "3")
    assert _backend.threads() == 3
    monkeypatch.setenv("ERGOPT_THREADS", "bad")
    assert _backend.threads() == 1
