"""Ergodic optimization for the Gauss continued-fraction map."""
from ._backend import BACKEND
from .cf_core import (
    INF,
    DomainError,
    cf_expand,
    continuants,
    cylinder,
    em_bounds,
    eval_cf,
    gauss_step,
    hat_rho,
    inverse_branch,
    periodic_point,
)
from .surd import QuadSurd

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INF",
    "DomainError",
    "QuadSurd",
    "cf_expand",
    "continuants",
    "cylinder",
    "em_bounds",
    "eval_cf",
    "gauss_step",
    "hat_rho",
    "inverse_branch",
    "periodic_point",
]
