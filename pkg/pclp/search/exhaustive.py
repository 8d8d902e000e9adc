"""
Reference search: score every enumerated proof.
"""

from typing import Callable, Optional, Tuple

from ..clp import Program, ProofTree, Query, enumerate_proofs
from ..errors import NoProof
from ..models import LogLinearModel, unnormalized_log_weight
from .viterbi import Scored

TreeScore = Callable[[ProofTree], float]


def best_proof_exhaustive(
    program: Program, query: Query, depth: int, score: TreeScore
) -> Tuple[ProofTree, float]:
    """Highest-scoring proof, ties going to the smaller clause sequence. Raises NoProof."""
    best: Optional[Tuple[Scored, ProofTree]] = None
    for tree in enumerate_proofs(program, query, depth):
        scored = Scored(float(score(tree)), tree.clause_ids)
        if best is None or scored.beats(best[0]):
            best = (scored, tree)
    if best is None:
        raise NoProof(query, depth)
    return best[1], best[0].weight


def model_score(model: LogLinearModel) -> TreeScore:
    return lambda tree: unnormalized_log_weight(model, tree)
