"""
Parameter estimation and property selection for log-linear proof-tree models.
"""

from .auxiliary import (
    Candidate,
    IMResult,
    as_space,
    aux_A,
    drop_silent_properties,
    gain,
    gain_function,
    im_estimate,
    im_gamma,
    im_step,
)
from .candidates import (
    best_candidate,
    generate_candidates,
    initial_candidates,
    pattern_extensions,
    select_property,
)
from .newton import RootResult, bracketed_root, newton, solve_decreasing

__all__ = [
    "Candidate",
    "IMResult",
    "as_space",
    "aux_A",
    "drop_silent_properties",
    "gain",
    "gain_function",
    "im_estimate",
    "im_gamma",
    "im_step",
    "best_candidate",
    "generate_candidates",
    "initial_candidates",
    "pattern_extensions",
    "select_property",
    "RootResult",
    "bracketed_root",
    "newton",
    "solve_decreasing",
]
