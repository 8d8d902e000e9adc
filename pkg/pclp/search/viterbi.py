"""
Most probable proof under clause-local weights.

Each item's best derivation is computed in dependency order over the closed
chart: a predicted item weighs its clause, a completed item the sum of its
antecedents. Ties are broken on the preorder clause sequence so results do not
depend on agenda order.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

from ..clp import ClauseId, Program, ProofTree, Query, replay_clauses
from ..errors import NoProof
from ..models import LogLinearModel, RootProperty, SubtreePattern
from ..utils.numeric import COMPARISON_TOL
from .chart import Chart, closure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scored:
    """A derivation's weight and its preorder clause sequence."""

    weight: float
    clause_ids: Tuple[ClauseId, ...]

    def beats(self, other: Optional["Scored"]) -> bool:
        if other is None:
            return True
        if self.weight > other.weight + COMPARISON_TOL:
            return True
        if self.weight < other.weight - COMPARISON_TOL:
            return False
        return self.clause_ids < other.clause_ids


def best_derivations(chart: Chart, clause_weight: Callable[[ClauseId], float]) -> Dict[int, Scored]:
    """Best derivation of every item of the closed chart."""
    best: Dict[int, Scored] = {}
    for item in chart.topological():
        for derivation in chart.derivations[item.id]:
            if derivation.kind == "axiom":
                candidate = Scored(0.0, ())
            elif derivation.kind == "predict":
                candidate = Scored(clause_weight(derivation.clause_id), (derivation.clause_id,))
            else:
                left, right = best.get(derivation.left), best.get(derivation.right)
                if left is None or right is None:
                    continue
                candidate = Scored(left.weight + right.weight, left.clause_ids + right.clause_ids)
            if candidate.beats(best.get(item.id)):
                best[item.id] = candidate
    return best


def rebuild(program: Program, query: Query, scored: Scored) -> ProofTree:
    tree = replay_clauses(program, query, scored.clause_ids)
    if tree is None:
        raise RuntimeError(f"chart derivation {[c.key for c in scored.clause_ids]} does not replay for '{query}'")
    return tree


def best_proof_clause_weights(
    program: Program, query: Query, weights: Mapping[str, float], depth: int
) -> Tuple[ProofTree, float]:
    """
    The proof of ``query`` within ``depth`` clauses maximizing the sum of its
    clause weights (keyed ``pred/arity.j``; missing clauses weigh 0).
    Raises NoProof when the query has none.
    """
    chart = closure(program, query, depth)
    best = best_derivations(chart, lambda clause_id: weights.get(clause_id.key, 0.0))
    winner: Optional[Scored] = None
    for item in chart.passive_query_items():
        scored = best.get(item.id)
        if scored is not None and scored.beats(winner):
            winner = scored
    if winner is None:
        raise NoProof(query, depth)
    logger.debug("best proof of '%s' over %d chart items weighs %.12g", query, len(chart), winner.weight)
    return rebuild(program, query, winner), winner.weight


def clause_weights(model: LogLinearModel) -> Dict[str, float]:
    """
    Per-clause weights ``log p0(c) + λ_c`` for a model whose properties are all
    single-node patterns; the root parameter is left out since it shifts every
    proof alike. Raises ValueError for any other property.
    """
    weights = dict(model.base.log_mapping)
    for prop, weight in zip(model.properties, model.weights):
        if isinstance(prop, RootProperty):
            continue
        if not (isinstance(prop, SubtreePattern) and prop.is_single_node):
            raise ValueError(f"property '{prop}' is not local to one clause")
        weights[prop.root.clause_id.key] += weight
    return weights
