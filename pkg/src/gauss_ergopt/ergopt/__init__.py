"""Ergodic suprema, classification, locking experiments and transport sequences."""
from .classify import Budgets, Classification, classify
from .cycles import BudgetExceeded, CycleBound, restricted_sup_cycle_bound
from .example76 import Example76Report, example_7_6
from .locking import LockingReport, candidate_family, locking_constants, locking_experiment
from .search import (
    GlobalSupEstimate,
    OrbitSearchResult,
    RankedMeasure,
    fcf_sweep,
    global_sup_estimate,
    orbit_sweep,
    restricted_sup_orbits,
)
from .transport import TransportTrace, periodic_transport, transport_sequence

__all__ = [
    "Budgets",
    "BudgetExceeded",
    "Classification",
    "CycleBound",
    "Example76Report",
    "GlobalSupEstimate",
    "LockingReport",
    "OrbitSearchResult",
    "RankedMeasure",
    "TransportTrace",
    "candidate_family",
    "classify",
    "example_7_6",
    "fcf_sweep",
    "global_sup_estimate",
    "locking_constants",
    "locking_experiment",
    "orbit_sweep",
    "periodic_transport",
    "restricted_sup_cycle_bound",
    "restricted_sup_orbits",
    "transport_sequence",
]
