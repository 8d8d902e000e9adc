"""
Herbrand terms and the equation solver.
"""

from .term import (
    TRUE,
    Compound,
    Constraint,
    Equation,
    SolvedForm,
    Term,
    Variable,
    constant,
    is_ground,
    occurs,
    substitute,
    subterm_at,
    subterm_paths,
    term_variables,
)
from .solver import conjoin, fresh_variable, rename_apart, renaming_for, solve

__all__ = [
    "TRUE",
    "Compound",
    "Constraint",
    "Equation",
    "SolvedForm",
    "Term",
    "Variable",
    "constant",
    "is_ground",
    "occurs",
    "substitute",
    "subterm_at",
    "subterm_paths",
    "term_variables",
    "conjoin",
    "fresh_variable",
    "rename_apart",
    "renaming_for",
    "solve",
]
