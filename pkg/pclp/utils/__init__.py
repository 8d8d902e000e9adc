"""
Utility modules for pclp. ``OutputManager`` lives in ``pclp.utils.output_manager``
and is imported from there, since it depends on the model packages that in turn
use the numeric helpers below.
"""

from .numeric import (
    COMPARISON_TOL,
    NORMALIZATION_TOL,
    chain_generators,
    format_float,
    format_parameter,
    seed_sequence,
)

__all__ = [
    "COMPARISON_TOL",
    "NORMALIZATION_TOL",
    "chain_generators",
    "format_float",
    "format_parameter",
    "seed_sequence",
]
