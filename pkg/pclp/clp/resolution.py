"""
Goal reduction with leftmost selection and depth-bounded proof enumeration.
"""

import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from ..terms import Variable, conjoin, renaming_for
from .program import Atom, Clause, ClauseId, Goal, Program, Query
from .proof_tree import ProofTree

logger = logging.getLogger(__name__)


def variant_for(atom: Atom, clause: Clause, avoid: Iterable[str]) -> Clause:
    """
    Variant of ``clause`` whose head is exactly ``atom``; the remaining clause
    variables are renamed away from ``avoid``.
    """
    fixed = dict(zip(clause.head.args, atom.args))
    mapping = renaming_for(clause.variables(), [Variable(name) for name in avoid], fixed)
    return clause.rename(mapping)


def reduce(goal: Goal, clause: Clause) -> Optional[Goal]:
    """
    One goal-reduction step on the leftmost atom followed by constraint solving.
    Returns ``None`` for a failed branch.
    """
    if not goal.atoms:
        raise ValueError("cannot reduce an empty goal")
    selected = goal.atoms[0]
    if selected.indicator != clause.head.indicator:
        return None
    variant = variant_for(selected, clause, goal.reserved)
    solved = conjoin(goal.constraint, variant.body_constraint)
    if solved is None:
        return None
    reserved = goal.reserved | {var.name for var in variant.variables()}
    return Goal(variant.body_atoms + goal.atoms[1:], solved, reserved)


class ProofEnumerator:
    """Depth-first SLD search; ``censored`` counts branches cut by the depth bound."""

    def __init__(self, program: Program, depth: int):
        if depth < 1:
            raise ValueError("depth bound must be at least 1")
        self.program = program
        self.depth = depth
        self.censored = 0

    def proofs(self, query: Query) -> Iterator[ProofTree]:
        goal = query.goal()
        if goal is None:
            return
        yield from self._search(query, goal, (), ())

    def _search(
        self,
        query: Query,
        goal: Goal,
        clauses: Tuple[Clause, ...],
        goals: Tuple[Goal, ...],
    ) -> Iterator[ProofTree]:
        if goal.is_success:
            yield ProofTree(query, tuple(c.id for c in clauses), clauses, goals, goal.constraint)
            return
        if len(clauses) >= self.depth:
            self.censored += 1
            return
        for clause in self.program.alternatives(goal.atoms[0].indicator):
            reduced = reduce(goal, clause)
            if reduced is not None:
                yield from self._search(query, reduced, clauses + (clause,), goals + (reduced,))


def enumerate_proofs(program: Program, query: Query, depth: int) -> List[ProofTree]:
    """All proof trees of ``query`` with at most ``depth`` reduction steps, in clause-id order."""
    enumerator = ProofEnumerator(program, depth)
    trees = list(enumerator.proofs(query))
    if enumerator.censored:
        logger.debug("query '%s': %d branches censored at depth %d", query, enumerator.censored, depth)
    return trees


def first_proof(program: Program, query: Query, depth: int) -> Optional[ProofTree]:
    """First proof found by the deterministic leftmost search."""
    return next(ProofEnumerator(program, depth).proofs(query), None)


def replay_clauses(program: Program, query: Query, clause_ids: Sequence[ClauseId]) -> Optional[ProofTree]:
    """
    Re-run ``clause_ids`` through reduction from the query. Returns the proof tree
    or ``None`` when some step fails or atoms remain.
    """
    goal = query.goal()
    if goal is None:
        return None
    clauses: List[Clause] = []
    goals: List[Goal] = []
    for clause_id in clause_ids:
        clause = program.clause(clause_id.key)
        if clause is None or not goal.atoms:
            return None
        goal = reduce(goal, clause)
        if goal is None:
            return None
        clauses.append(clause)
        goals.append(goal)
    if not goal.is_success:
        return None
    return ProofTree(query, tuple(clause_ids), tuple(clauses), tuple(goals), goal.constraint)


def replay(program: Program, tree: ProofTree) -> bool:
    """True when the tree's clause sequence reproduces its answer exactly."""
    replayed = replay_clauses(program, tree.query, tree.clause_ids)
    return replayed is not None and replayed.answer == tree.answer
