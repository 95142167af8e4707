"""Closed forms, exact counts and Monte Carlo checks for the moment method."""

from .counting import FnkTable, count_fnk, fnk_bound_ii_log, fnk_bound_iii, fnk_bracket_i, ne
from .gamma import GammaTail, gamma_lower_cdf, independent_min_cdf, log_gamma_tail, markov_upper
from .moments import BoundTermLog, empirical_pz_ratio, mean_connecting, second_moment_terms
from .simulation import good_edge_stats, joint_tail_check

__all__ = [
    "FnkTable",
    "count_fnk",
    "fnk_bound_ii_log",
    "fnk_bound_iii",
    "fnk_bracket_i",
    "ne",
    "GammaTail",
    "gamma_lower_cdf",
    "independent_min_cdf",
    "log_gamma_tail",
    "markov_upper",
    "BoundTermLog",
    "empirical_pz_ratio",
    "mean_connecting",
    "second_moment_terms",
    "good_edge_stats",
    "joint_tail_check",
]
