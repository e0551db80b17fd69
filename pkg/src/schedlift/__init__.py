"""Sherali-Adams lifts of makespan scheduling LPs: exact solving, rounding, lower bounds."""

from .estimator import LiftRoundingScheduler
from .formulations import build_assign, build_assign_sym, build_clp, build_formulation, build_order
from .lift import Pseudoexpectation, build_sa_lift, verify_sa_pe
from .model import Configuration, Instance, classify_jobs, load_instance
from .rounding import Schedule, brute_force_opt, gap_search, ptas_round, ptas_round_order

__all__ = [
    "Configuration",
    "Instance",
    "LiftRoundingScheduler",
    "Pseudoexpectation",
    "Schedule",
    "brute_force_opt",
    "build_assign",
    "build_assign_sym",
    "build_clp",
    "build_formulation",
    "build_order",
    "build_sa_lift",
    "classify_jobs",
    "gap_search",
    "load_instance",
    "ptas_round",
    "ptas_round_order",
    "verify_sa_pe",
]
