"""
Candidate properties and gain-based property selection.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

from ..clp import Program
from ..errors import NoCandidates
from ..models import AnswerBinding, LogLinearModel, Property, SubtreePattern, TreeSpace, single_node
from ..terms import is_ground, subterm_paths
from ..utils.numeric import COMPARISON_TOL
from .auxiliary import Candidate, CorpusOrSpace, as_space, gain

logger = logging.getLogger(__name__)


def initial_candidates(space: TreeSpace, program: Program) -> List[Property]:
    """
    Single-node patterns for every clause that can resolve a query's root atom,
    and a binding property for every ground (argument path, term) pair seen in
    the answers.
    """
    found: Dict[Property, None] = {}
    for query in space.queries:
        root = query.root_atom
        if root is None:
            continue
        for clause in program.alternatives(root.indicator):
            found.setdefault(single_node(clause), None)
    for tree in space.trees:
        root = tree.query.root_atom
        if root is None:
            continue
        for position, arg in enumerate(root.args, start=1):
            bound = tree.answer.apply(arg)
            for path, sub in subterm_paths(bound, (position,)):
                if is_ground(sub):
                    found.setdefault(AnswerBinding(path, sub), None)
    return list(found)


def pattern_extensions(model: LogLinearModel, program: Program) -> List[Property]:
    """One-step extensions of every subtree pattern already in the model."""
    found: Dict[Property, None] = {}
    for prop in model.properties:
        if isinstance(prop, SubtreePattern):
            for extension in prop.extensions(program):
                found.setdefault(extension, None)
    return list(found)


def generate_candidates(
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    program: Optional[Program] = None,
    depth: Optional[int] = None,
    cap: int = 10_000,
) -> List[Property]:
    """
    Initial candidates plus one-step extensions of the model's patterns, minus
    properties the model already has, sorted by serialization and truncated to
    ``cap``.
    """
    program = program or model.program
    space = as_space(model, corpus, depth)
    pool = {prop: None for prop in initial_candidates(space, program) + pattern_extensions(model, program)}
    candidates = sorted((prop for prop in pool if prop not in model), key=lambda prop: prop.serialize())
    if len(candidates) > cap:
        logger.warning("candidate pool of %d truncated to %d", len(candidates), cap)
        candidates = candidates[:cap]
    return candidates


def best_candidate(scored: Iterable[Candidate]) -> Candidate:
    """Largest gain; near-ties go to the lexicographically smallest serialization."""
    scored = list(scored)
    if not scored:
        raise NoCandidates("no candidate properties to select from")
    top = max(candidate.gain for candidate in scored)
    tied = [candidate for candidate in scored if candidate.gain >= top - COMPARISON_TOL]
    return min(tied, key=lambda candidate: candidate.key)


def select_property(
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    program: Optional[Program] = None,
    depth: Optional[int] = None,
    candidates: Optional[Sequence[Property]] = None,
    cap: int = 10_000,
    newton_max_iter: int = 50,
    newton_tol: float = 1e-10,
    bracket: float = 30.0,
) -> Candidate:
    """Score every candidate by its gain and return the best one."""
    space = as_space(model, corpus, depth)
    if candidates is None:
        candidates = generate_candidates(model, space, program, cap=cap)
    scored = [gain(prop, model, space, None, newton_max_iter, newton_tol, bracket) for prop in candidates]
    chosen = best_candidate(scored)
    if chosen.degenerate:
        logger.warning("every candidate is degenerate; selected '%s' with gain 0", chosen.key)
    return chosen
