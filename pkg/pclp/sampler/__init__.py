"""
Metropolis-Hastings sampling and Monte-Carlo versions of the Newton updates.
"""

from .estimators import (
    mc_candidate,
    mc_gain,
    mc_newton_estimate,
    mc_newton_select,
    observed_total,
    s_r,
    t_y,
    u_r,
)
from .mh import SampleSet, draw_samples, mh_sample, transition_matrix, unconstrained_query
from .tables import CountTables, build_tables

__all__ = [
    "mc_candidate",
    "mc_gain",
    "mc_newton_estimate",
    "mc_newton_select",
    "observed_total",
    "s_r",
    "t_y",
    "u_r",
    "SampleSet",
    "draw_samples",
    "mh_sample",
    "transition_matrix",
    "unconstrained_query",
    "CountTables",
    "build_tables",
]
