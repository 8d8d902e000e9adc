"""
Definite clause programs, generalized SLD resolution and proof trees.
"""

from .parser import parse_corpus, parse_program, parse_query, parse_term
from .program import Atom, Clause, ClauseId, Goal, Program, Query
from .proof_tree import ClauseNode, ProofTree, answer
from .resolution import (
    ProofEnumerator,
    enumerate_proofs,
    first_proof,
    reduce,
    replay,
    replay_clauses,
    variant_for,
)

__all__ = [
    "parse_corpus",
    "parse_program",
    "parse_query",
    "parse_term",
    "Atom",
    "Clause",
    "ClauseId",
    "Goal",
    "Program",
    "Query",
    "ClauseNode",
    "ProofTree",
    "answer",
    "ProofEnumerator",
    "enumerate_proofs",
    "first_proof",
    "reduce",
    "replay",
    "replay_clauses",
    "variant_for",
]
