"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``GAUSS_ERGOPT_PURE=1`` to force the numpy kernels.
"""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("GAUSS_ERGOPT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"


def threads() -> int:
    try:
        return max(1, int(os.environ.get("ERGOPT_THREADS", "1")))
    except ValueError:
        return 1
