"""
Most probable proof under subtree-pattern properties.

A pattern of height h fires at a node depending only on the top h levels of
the subtree below it. Each chart item therefore keeps, per distinct fragment
truncated to one level less than the tallest pattern, the best score found so
far. Patterns are scored at a node once its item becomes passive, so every
firing is counted exactly once.
"""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from ..clp import Program, ProofTree, Query
from ..errors import NoProof, OverlappingProperties
from ..models import LogLinearModel, RootProperty, SubtreePattern, unnormalized_log_weight
from ..utils.numeric import COMPARISON_TOL
from .chart import Item, closure
from .partial_trees import PartialProofTree, combine_trees
from .viterbi import Scored, rebuild

logger = logging.getLogger(__name__)

# Query items never feed a pattern, so a single fragment slot suffices for them.
_QUERY = PartialProofTree.root(0)

Table = Dict[PartialProofTree, Scored]


def subtree_patterns(model: LogLinearModel) -> List[Tuple[SubtreePattern, float]]:
    """The model's patterns with their weights; ValueError for any other non-root property."""
    patterns = []
    for prop, weight in zip(model.properties, model.weights):
        if isinstance(prop, RootProperty):
            continue
        if not isinstance(prop, SubtreePattern):
            raise ValueError(f"property '{prop}' is not a subtree pattern")
        patterns.append((prop, weight))
    return patterns


def check_disjoint(patterns: Sequence[SubtreePattern]) -> None:
    for first, second in combinations(patterns, 2):
        shared = first.clause_ids() & second.clause_ids()
        if shared:
            keys = ", ".join(sorted(clause_id.key for clause_id in shared))
            raise OverlappingProperties(f"'{first}' and '{second}' share clauses {keys}")


def _keep(table: Table, fragment: PartialProofTree, scored: Scored) -> None:
    if scored.beats(table.get(fragment)):
        table[fragment] = scored


def best_proof_subtree_props(
    program: Program, query: Query, model: LogLinearModel, depth: int
) -> Tuple[ProofTree, float]:
    """
    The proof of ``query`` maximizing the model's unnormalized log weight when
    every property is a subtree pattern and no two patterns share a clause.
    Returns the tree and its log weight. Raises OverlappingProperties, NoProof,
    or ValueError for properties that are not patterns.
    """
    weighted = subtree_patterns(model)
    check_disjoint([prop for prop, _ in weighted])
    signature_height = max((prop.height for prop, _ in weighted), default=1) - 1
    log_base = model.base.log_mapping

    def fired(fragment: PartialProofTree) -> float:
        return sum(weight for prop, weight in weighted if fragment.matches(prop.root))

    def finish(item: Item, fragment: PartialProofTree, score: float) -> Tuple[PartialProofTree, float]:
        if item.is_query:
            return _QUERY, score
        if not item.is_passive:
            return fragment, score
        return fragment.truncate(signature_height), score + fired(fragment)

    chart = closure(program, query, depth)
    tables: Dict[int, Table] = {}
    for item in chart.topological():
        table: Table = {}
        for derivation in chart.derivations[item.id]:
            if derivation.kind == "axiom":
                _keep(table, _QUERY, Scored(0.0, ()))
            elif derivation.kind == "predict":
                clause = program.clause(derivation.clause_id.key)
                grown = combine_trees("vertical", PartialProofTree.open(), PartialProofTree.predicted(clause))
                fragment, score = finish(item, grown, log_base[clause.id.key])
                _keep(table, fragment, Scored(score, (clause.id,)))
            else:
                for left_fragment, left in tables.get(derivation.left, {}).items():
                    for right_fragment, right in tables.get(derivation.right, {}).items():
                        if left_fragment == _QUERY:
                            combined = _QUERY
                        else:
                            combined = combine_trees("substitute", left_fragment, right_fragment)
                        fragment, score = finish(item, combined, left.weight + right.weight)
                        _keep(table, fragment, Scored(score, left.clause_ids + right.clause_ids))
        if table:
            tables[item.id] = table

    winner: Optional[Scored] = None
    for item in chart.passive_query_items():
        for scored in tables.get(item.id, {}).values():
            if scored.beats(winner):
                winner = scored
    if winner is None:
        raise NoProof(query, depth)
    tree = rebuild(program, query, winner)
    weight = unnormalized_log_weight(model, tree)
    expected = winner.weight + model.weights[0]
    if abs(weight - expected) > COMPARISON_TOL * max(1.0, abs(weight)):
        logger.warning("subtree search scored '%s' at %.12g but the tree weighs %.12g", query, expected, weight)
    return tree, weight
