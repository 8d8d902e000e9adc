"""
Choose the cheapest exact search a model allows.
"""

import logging

from pydantic import BaseModel, ConfigDict

from ..clp import ProofTree, Query
from ..errors import OverlappingProperties
from ..models import LogLinearModel
from .exhaustive import best_proof_exhaustive, model_score
from .subtree_search import best_proof_subtree_props
from .viterbi import best_proof_clause_weights, clause_weights

logger = logging.getLogger(__name__)


class BestProof(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tree: ProofTree
    log_weight: float
    method: str


def best_proof(model: LogLinearModel, query: Query, depth: int, method: str = "auto") -> BestProof:
    """
    Most probable proof of ``query``. ``auto`` uses clause weights when every
    property is a single clause, the subtree search when the patterns are
    disjoint, and full enumeration otherwise.
    """
    program = model.program
    if method in ("auto", "clause"):
        try:
            weights = clause_weights(model)
        except ValueError:
            if method == "clause":
                raise
        else:
            tree, weight = best_proof_clause_weights(program, query, weights, depth)
            return BestProof(tree=tree, log_weight=weight + model.weights[0], method="clause")
    if method in ("auto", "subtree"):
        try:
            tree, weight = best_proof_subtree_props(program, query, model, depth)
            return BestProof(tree=tree, log_weight=weight, method="subtree")
        except (OverlappingProperties, ValueError) as exc:
            if method == "subtree":
                raise
            logger.info("falling back to enumeration for '%s': %s", query, exc)
    if method not in ("auto", "exhaustive"):
        raise ValueError(f"unknown search method '{method}'")
    tree, weight = best_proof_exhaustive(program, query, depth, model_score(model))
    return BestProof(tree=tree, log_weight=weight, method="exhaustive")
