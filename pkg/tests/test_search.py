import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pclp.clp import enumerate_proofs, parse_program, parse_query
from pclp.errors import NoProof, NotApplicable, OverlappingProperties, ShapeMismatch
from pclp.models import (
    LogLinearModel,
    PatternNode,
    SubtreePattern,
    extend_model,
    parse_property,
    single_node,
    unnormalized_log_weight,
)
from pclp.search import (
    QUERY_PREDICATE,
    Chart,
    PartialProofTree,
    Scored,
    best_proof,
    best_proof_clause_weights,
    best_proof_exhaustive,
    best_proof_subtree_props,
    check_disjoint,
    closure,
    combine_trees,
    complete,
    model_score,
    predict,
    query_item,
)

from .conftest import LOG2
from .strategies import disjoint_patterns, programs_with_query

random_settings = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
fixture_settings = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


def clause_score(weights):
    return lambda tree: sum(weights.get(clause_id.key, 0.0) for clause_id in tree.clause_ids)


def enumerated_answers(program, query, depth):
    keep = query.variables
    return {(str(tree.answer.canonical(keep)), tree.depth) for tree in enumerate_proofs(program, query, depth)}


def chart_answers(program, query, depth):
    return {(str(answer), used) for answer, used in closure(program, query, depth).answers()}


# ---- deduction steps ----


@pytest.fixture
def s_item(program, query_s):
    return predict(query_item(query_s), program.clause("s/1.1"))


def test_query_item(query_s):
    item = query_item(query_s)
    assert item.head.predicate == QUERY_PREDICATE
    assert item.is_query and not item.is_passive
    assert (item.depth, item.level) == (0, 0)
    with pytest.raises(NotApplicable):
        query_item(parse_query("s(Z), Z = a, Z = b"))


def test_predict_and_complete(program, s_item):
    assert str(s_item.head) == "s(Z)"
    assert [str(atom) for atom in s_item.body] == ["p(Z)", "q(Z)"]
    assert (s_item.depth, s_item.level) == (1, 1)

    p_a = predict(s_item, program.clause("p/1.1"))
    assert p_a.is_passive
    assert str(p_a.constraint) == "{Z=a}"
    assert p_a.level == 2

    after_p = complete(s_item, p_a)
    assert [str(atom) for atom in after_p.body] == ["q(Z)"]
    assert str(after_p.constraint) == "{Z=a}"
    assert (after_p.depth, after_p.level) == (2, 1)


def test_predict_folds_in_the_caller_constraint(program, s_item):
    after_p = complete(s_item, predict(s_item, program.clause("p/1.1")))
    with pytest.raises(NotApplicable):
        predict(after_p, program.clause("q/1.2"))
    assert predict(after_p, program.clause("q/1.1")).is_passive


def test_steps_that_do_not_apply(program, s_item):
    p_a = predict(s_item, program.clause("p/1.1"))
    with pytest.raises(NotApplicable):
        predict(s_item, program.clause("q/1.1"))
    with pytest.raises(NotApplicable):
        predict(p_a, program.clause("p/1.1"))
    with pytest.raises(NotApplicable):
        complete(s_item, s_item)
    with pytest.raises(NotApplicable):
        complete(p_a, p_a)

    after_a = complete(s_item, p_a)
    after_b = complete(s_item, predict(s_item, program.clause("p/1.2")))
    q_b = predict(after_b, program.clause("q/1.2"))
    with pytest.raises(NotApplicable):
        complete(after_a, q_b)


def test_item_keys_ignore_variable_names(program, s_item):
    renamed = predict(query_item(parse_query("s(W)")), program.clause("s/1.1"))
    assert renamed.key == s_item.key


# ---- chart ----


def test_chart_answers_on_sample(program, query_s, corpus, depth):
    assert chart_answers(program, query_s, depth) == {("{Z=a}", 3), ("{Z=b}", 3)}
    assert chart_answers(program, corpus[0], depth) == {("{Z=a}", 3)}
    assert chart_answers(program, query_s, 2) == set()


def test_chart_needs_a_positive_bound(program, query_s):
    with pytest.raises(ValueError):
        Chart(program, query_s, 0)


def test_chart_on_unsatisfiable_query(program, depth):
    chart = closure(program, parse_query("s(Z), Z = a, Z = b"), depth)
    assert len(chart) == 0
    assert chart.answers() == []


def test_chart_terminates_on_left_recursion():
    program = parse_program("n(Z) :- n(Y), Z = s(Y).\nn(Z) :- Z = z.")
    query = parse_query("n(Z)")
    assert chart_answers(program, query, 4) == enumerated_answers(program, query, 4)
    assert ("{Z=s(s(s(z)))}", 4) in chart_answers(program, query, 4)


def test_topological_order_puts_antecedents_first(program, query_s, depth):
    chart = closure(program, query_s, depth)
    position = {item.id: index for index, item in enumerate(chart.topological())}
    for item_id, derivations in chart.derivations.items():
        for derivation in derivations:
            if derivation.kind == "complete":
                assert position[derivation.left] < position[item_id]
                assert position[derivation.right] < position[item_id]


@random_settings
@given(programs_with_query())
def test_chart_agrees_with_enumeration(case):
    program, query = case
    assert chart_answers(program, query, 4) == enumerated_answers(program, query, 4)


# ---- clause-weight search ----


def test_best_proof_with_clause_weights(program, query_s, depth):
    tree, weight = best_proof_clause_weights(program, query_s, {"p/1.1": LOG2}, depth)
    assert tree.bracketed() == "(11 (21) (31))"
    assert weight == pytest.approx(LOG2, abs=1e-12)
    tree, _ = best_proof_clause_weights(program, query_s, {"q/1.2": 1.0}, depth)
    assert tree.bracketed() == "(11 (22) (32))"


def test_ties_go_to_the_smaller_clause_sequence(program, query_s, depth):
    tree, weight = best_proof_clause_weights(program, query_s, {}, depth)
    assert tree.bracketed() == "(11 (21) (31))"
    assert weight == 0.0
    first, second = Scored(1.0, ()), Scored(1.0 + 1e-12, ())
    assert not second.beats(first) and not first.beats(second)


def test_no_proof_is_reported(program, depth):
    with pytest.raises(NoProof):
        best_proof_clause_weights(program, parse_query("s(Z), Z = c"), {}, depth)
    with pytest.raises(NoProof):
        best_proof_exhaustive(program, parse_query("s(Z), Z = c"), depth, clause_score({}))


@random_settings
@given(programs_with_query(), st.lists(st.floats(-2, 2), min_size=8, max_size=8))
def test_clause_weight_search_matches_enumeration(case, values):
    program, query = case
    weights = {clause.id.key: value for clause, value in zip(program, values)}
    try:
        _, expected = best_proof_exhaustive(program, query, 4, clause_score(weights))
    except NoProof:
        with pytest.raises(NoProof):
            best_proof_clause_weights(program, query, weights, 4)
        return
    tree, weight = best_proof_clause_weights(program, query, weights, 4)
    assert weight == pytest.approx(expected, abs=1e-9)
    assert clause_score(weights)(tree) == pytest.approx(weight, abs=1e-9)


# ---- subtree-pattern search ----


def test_overlapping_patterns_are_rejected(program):
    first = parse_property("tree (s/1.1 (p/1.1) _)", program)
    second = parse_property("tree (p/1.1)", program)
    with pytest.raises(OverlappingProperties):
        check_disjoint([first, second])
    check_disjoint([first, parse_property("tree (q/1.2)", program)])


@fixture_settings
@given(w1=st.floats(-3, 3), w2=st.floats(-3, 3))
def test_subtree_search_matches_enumeration(uniform_model, program, query_s, depth, w1, w2):
    model = uniform_model.extend(parse_property("tree (s/1.1 (p/1.2) _)", program), w1).extend(
        parse_property("tree (q/1.1)", program), w2
    )
    _, expected = best_proof_exhaustive(program, query_s, depth, model_score(model))
    tree, weight = best_proof_subtree_props(program, query_s, model, depth)
    assert weight == pytest.approx(expected, abs=1e-9)
    assert unnormalized_log_weight(model, tree) == pytest.approx(weight, abs=1e-12)


def test_subtree_search_on_deep_patterns():
    program = parse_program("n(Z) :- Z = z.\nn(Z) :- Z = s(Y), n(Y).\nm(Z) :- n(Z), n(Z).")
    model = LogLinearModel.initial(program).extend(parse_property("tree (n/1.2 (n/1.2 (n/1.1)))", program), 5.0)
    query = parse_query("m(Z)")
    tree, weight = best_proof_subtree_props(program, query, model, 7)
    _, expected = best_proof_exhaustive(program, query, 7, model_score(model))
    assert weight == pytest.approx(expected, abs=1e-9)
    assert "(12 (12 (11)))" in tree.bracketed()


@random_settings
@given(st.data())
def test_subtree_search_matches_enumeration_on_random_programs(data):
    program, query = data.draw(programs_with_query())
    patterns = data.draw(disjoint_patterns(program))
    weights = data.draw(st.lists(st.floats(-2, 2), min_size=len(patterns), max_size=len(patterns)))
    model = extend_model(LogLinearModel.initial(program), patterns, weights)
    try:
        _, expected = best_proof_exhaustive(program, query, 4, model_score(model))
    except NoProof:
        with pytest.raises(NoProof):
            best_proof_subtree_props(program, query, model, 4)
        return
    tree, weight = best_proof_subtree_props(program, query, model, 4)
    assert weight == pytest.approx(expected, abs=1e-9)
    assert unnormalized_log_weight(model, tree) == pytest.approx(weight, abs=1e-9)


def test_subtree_search_rejects_other_properties(uniform_model, bind_a, program, query_s, depth):
    with pytest.raises(ValueError):
        best_proof_subtree_props(program, query_s, uniform_model.extend(bind_a, 1.0), depth)


# ---- dispatcher ----


def test_dispatcher_uses_the_cheapest_search(uniform_model, program, query_s, depth, bind_a):
    local = uniform_model.extend(single_node(program.clause("p/1.1")), LOG2)
    found = best_proof(local, query_s, depth)
    assert found.method == "clause"
    assert found.tree.bracketed() == "(11 (21) (31))"
    assert found.log_weight == pytest.approx(unnormalized_log_weight(local, found.tree))

    patterned = uniform_model.extend(parse_property("tree (s/1.1 _ (q/1.2))", program), 1.0)
    found = best_proof(patterned, query_s, depth)
    assert found.method == "subtree"
    assert found.tree.bracketed() == "(11 (22) (32))"

    found = best_proof(uniform_model.extend(bind_a, -1.0), query_s, depth)
    assert found.method == "exhaustive"
    assert found.tree.bracketed() == "(11 (22) (32))"
    assert found.log_weight == pytest.approx(math.log(0.25))


def test_dispatcher_falls_back_on_overlap(uniform_model, program, query_s, depth):
    model = uniform_model.extend(parse_property("tree (s/1.1 (p/1.1) _)", program), 1.0).extend(
        parse_property("tree (s/1.1 _ (q/1.2))", program), 2.0
    )
    found = best_proof(model, query_s, depth)
    assert found.method == "exhaustive"
    assert found.log_weight == pytest.approx(2.0 + math.log(0.25))
    with pytest.raises(OverlappingProperties):
        best_proof(model, query_s, depth, method="subtree")
    with pytest.raises(ValueError):
        best_proof(model, query_s, depth, method="clause")
    with pytest.raises(ValueError):
        best_proof(model, query_s, depth, method="fastest")


# ---- partial proof trees ----


def test_partial_tree_shapes(program, open_trees):
    s = program.clause("s/1.1")
    p_a = program.clause("p/1.1")
    q_a = program.clause("q/1.1")
    root = PartialProofTree.predicted(s)
    assert str(root) == "(11 · ·)"
    assert root.open_slots() == 2

    grown = combine_trees("vertical", root, PartialProofTree.predicted(p_a))
    assert str(grown) == "(11 (21) ·)"
    done = combine_trees("substitute", grown, PartialProofTree.predicted(q_a))
    assert done.is_complete
    assert done == PartialProofTree.from_node(open_trees[0].skeleton[0])
    assert done.height() == 2
    assert str(done.truncate(1)) == "(11 … …)"

    assert combine_trees("vertical", PartialProofTree.open(), root) == root

    left = combine_trees("vertical", root, PartialProofTree.predicted(p_a))
    right = PartialProofTree(s.id, (PartialProofTree.open(), PartialProofTree.predicted(q_a)))
    assert combine_trees("merge", left, right) == done


def test_partial_tree_shape_errors(program):
    s = program.clause("s/1.1")
    p_a = program.clause("p/1.1")
    root = PartialProofTree.predicted(s)
    grown = combine_trees("vertical", root, PartialProofTree.predicted(p_a))
    with pytest.raises(ShapeMismatch):
        combine_trees("vertical", root, grown)
    with pytest.raises(ShapeMismatch):
        combine_trees("substitute", root, root)
    full = PartialProofTree(s.id, (PartialProofTree.predicted(p_a), PartialProofTree.predicted(p_a)))
    with pytest.raises(ShapeMismatch):
        combine_trees("substitute", full, PartialProofTree.predicted(p_a))
    with pytest.raises(ShapeMismatch):
        combine_trees("merge", PartialProofTree.predicted(p_a), root)
    with pytest.raises(ValueError):
        combine_trees("sideways", root, root)


def test_partial_tree_matches_patterns(program):
    s = program.clause("s/1.1")
    p_a = program.clause("p/1.1")
    fragment = combine_trees("vertical", PartialProofTree.predicted(s), PartialProofTree.predicted(p_a))
    assert fragment.matches(PatternNode(s.id, (PatternNode(p_a.id), None)))
    assert not fragment.matches(PatternNode(s.id, (None, PatternNode(program.clause("q/1.1").id))))
    assert not PartialProofTree.cut().matches(PatternNode(s.id))
    assert SubtreePattern(PatternNode(s.id)).is_single_node
