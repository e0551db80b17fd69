"""The configuration-LP lower bound: hard instance, explicit pseudoexpectation, checks."""

from .checks import (
    check_conditioning,
    check_pseudoindependence,
    chu_vandermonde_check,
    chu_vandermonde_sweep,
    pseudoindependence_sweep,
    symmetry_check,
    verify_hard_sa,
)
from .hard_instance import HardInstance, certify_opt_lower_bound, gen_hard_instance
from .petersen import petersen_perfect_matchings
from .pseudo import b_poly, extensions, hard_pseudoexpectation, pe_b, pe_hard, pe_hard_cond
from .spanning import check_block_psd, check_span, moment_block, partitions_in_lambda, spanning_set

__all__ = [
    "HardInstance",
    "b_poly",
    "certify_opt_lower_bound",
    "check_block_psd",
    "check_conditioning",
    "check_pseudoindependence",
    "check_span",
    "chu_vandermonde_check",
    "chu_vandermonde_sweep",
    "extensions",
    "gen_hard_instance",
    "hard_pseudoexpectation",
    "moment_block",
    "partitions_in_lambda",
    "pe_b",
    "pe_hard",
    "pe_hard_cond",
    "petersen_perfect_matchings",
    "pseudoindependence_sweep",
    "spanning_set",
    "symmetry_check",
    "verify_hard_sa",
]
