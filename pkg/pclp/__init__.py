"""
pclp: probabilistic constraint logic programming.

Log-linear models over the proof trees of definite clause programs with
Herbrand equality constraints: exact and sampled parameter estimation,
property induction, and most-probable-proof search.
"""

__version__ = "0.1.0"

from .clp import Program, ProofTree, Query, enumerate_proofs, parse_corpus, parse_program, parse_query
from .default_config import DEFAULT_CONFIG, RunConfig
from .graph import InductionGraph, induce
from .models import LogLinearModel, read_model, write_model
from .search import best_proof

__all__ = [
    "Program",
    "ProofTree",
    "Query",
    "enumerate_proofs",
    "parse_corpus",
    "parse_program",
    "parse_query",
    "DEFAULT_CONFIG",
    "RunConfig",
    "InductionGraph",
    "induce",
    "LogLinearModel",
    "read_model",
    "write_model",
    "best_proof",
]
