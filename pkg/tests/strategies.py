"""
Hypothesis strategies for small random programs over unary predicates p0..p2.

Every body atom refers to a predicate that has at least one clause, and
constants are drawn from {a, b} with the occasional f(Y) wrapper, so proofs
exist often enough for the comparisons to be meaningful.
"""

import hypothesis.strategies as st

from pclp.clp import enumerate_proofs, parse_program, parse_query
from pclp.induction import initial_candidates
from pclp.models import LogLinearModel, TreeSpace, extend_model, single_node
from pclp.terms import Compound, Constraint, Equation, Variable, constant

PREDICATES = ("p0", "p1", "p2")
CONSTANTS = ("a", "b")
WEIGHTS = st.floats(min_value=-2.0, max_value=2.0)


@st.composite
def clause_texts(draw, defined):
    head = draw(st.sampled_from(defined))
    kind = draw(st.sampled_from(["fact", "wrap", "chain", "pair"]))
    if kind == "fact":
        return f"{head}(Z) :- Z = {draw(st.sampled_from(CONSTANTS))}."
    if kind == "wrap":
        return f"{head}(Z) :- Z = f(Y), {draw(st.sampled_from(defined))}(Y)."
    if kind == "chain":
        return f"{head}(Z) :- {draw(st.sampled_from(defined))}(Z)."
    first = draw(st.sampled_from(defined))
    second = draw(st.sampled_from(defined))
    return f"{head}(Z) :- {first}(Z), {second}(Z)."


@st.composite
def programs(draw, max_clauses=8):
    count = draw(st.integers(min_value=1, max_value=len(PREDICATES)))
    defined = list(PREDICATES[:count])
    # one fact per predicate keeps every predicate provable
    lines = [f"{name}(Z) :- Z = {draw(st.sampled_from(CONSTANTS))}." for name in defined]
    extra = draw(st.lists(clause_texts(defined), max_size=max_clauses - len(lines)))
    lines.extend(extra)
    return parse_program("\n".join(lines), "<random>"), defined


@st.composite
def programs_with_query(draw, max_clauses=8):
    program, defined = draw(programs(max_clauses))
    name = draw(st.sampled_from(defined))
    binding = draw(st.sampled_from([None, "a", "b", "f(a)"]))
    text = f"{name}(Z)" if binding is None else f"{name}(Z), Z = {binding}"
    return program, parse_query(text)


@st.composite
def disjoint_patterns(draw, program, max_patterns=3):
    """Up to ``max_patterns`` subtree patterns of ``program`` sharing no clause, each one or two levels deep."""
    used = set()
    patterns = []
    for clause in draw(st.permutations(list(program))):
        if len(patterns) >= max_patterns or clause.id in used or not draw(st.booleans()):
            continue
        pattern = single_node(clause)
        grown = [ext for ext in pattern.extensions(program) if not (ext.clause_ids() - {clause.id}) & used]
        if grown and draw(st.booleans()):
            pattern = draw(st.sampled_from(grown))
        used |= pattern.clause_ids()
        patterns.append(pattern)
    return patterns


@st.composite
def programs_with_corpus(draw, max_clauses=8, depth=4):
    """A program with one to three corpus queries, each provable within ``depth``."""
    program, defined = draw(programs(max_clauses))
    texts = draw(
        st.lists(
            st.tuples(st.sampled_from(defined), st.sampled_from([None, "a", "b", "f(a)"])),
            min_size=1,
            max_size=3,
        )
    )
    corpus = []
    for name, binding in texts:
        query = parse_query(f"{name}(Z)" if binding is None else f"{name}(Z), Z = {binding}")
        if enumerate_proofs(program, query, depth):
            corpus.append(query)
    # the open query of a fact-backed predicate always has a proof
    if not corpus:
        corpus.append(parse_query(f"{defined[0]}(Z)"))
    return program, corpus


VARIABLE_NAMES = ("X", "Y", "Z", "W")


def terms(max_leaves=6):
    """Terms over four variables, constants a and b, and the binary functor f."""
    leaves = st.sampled_from([Variable(name) for name in VARIABLE_NAMES] + [constant(name) for name in CONSTANTS])
    return st.recursive(
        leaves,
        lambda children: st.tuples(children, children).map(lambda pair: Compound("f", pair)),
        max_leaves=max_leaves,
    )


def constraints(max_size=3):
    return st.lists(st.builds(Equation, terms(), terms()), max_size=max_size).map(
        lambda equations: Constraint(tuple(equations))
    )


@st.composite
def models_on_corpora(draw, max_clauses=8, depth=4, max_properties=3):
    """A random corpus, its tree space, and the initial model extended by some of its candidates at random weights."""
    program, corpus = draw(programs_with_corpus(max_clauses, depth))
    space = TreeSpace(program, corpus, depth)
    candidates = initial_candidates(space, program)
    chosen = draw(st.lists(st.sampled_from(candidates), unique=True, max_size=max_properties)) if candidates else []
    weights = draw(st.lists(WEIGHTS, min_size=len(chosen), max_size=len(chosen)))
    model = extend_model(LogLinearModel.initial(program), chosen, weights)
    return space, model, candidates
