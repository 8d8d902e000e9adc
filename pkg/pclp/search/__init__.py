"""
Earley deduction and most-probable-proof search.
"""

from .best import BestProof, best_proof
from .chart import QUERY_PREDICATE, Chart, Derivation, Item, closure, complete, predict, query_item
from .exhaustive import best_proof_exhaustive, model_score
from .partial_trees import PartialProofTree, combine_trees
from .subtree_search import best_proof_subtree_props, check_disjoint, subtree_patterns
from .viterbi import Scored, best_derivations, best_proof_clause_weights, clause_weights

__all__ = [
    "BestProof",
    "best_proof",
    "QUERY_PREDICATE",
    "Chart",
    "Derivation",
    "Item",
    "closure",
    "complete",
    "predict",
    "query_item",
    "best_proof_exhaustive",
    "model_score",
    "PartialProofTree",
    "combine_trees",
    "best_proof_subtree_props",
    "check_disjoint",
    "subtree_patterns",
    "Scored",
    "best_derivations",
    "best_proof_clause_weights",
    "clause_weights",
]
