import math
from collections import Counter

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from pclp.clp import enumerate_proofs, parse_program, parse_query
from pclp.errors import NoProof
from pclp.models import AnswerBinding, ChoiceParams, LogLinearModel, exact_dist
from pclp.sampler import (
    SampleSet,
    build_tables,
    draw_samples,
    mc_candidate,
    mc_gain,
    mc_newton_estimate,
    mc_newton_select,
    mh_sample,
    observed_total,
    s_r,
    t_y,
    transition_matrix,
)
from pclp.terms import constant

from .conftest import LOG2


@pytest.fixture
def skewed_proposal(program):
    return ChoiceParams.from_mapping(
        program, {"s/1.1": 1.0, "p/1.1": 0.2, "p/1.2": 0.8, "q/1.1": 0.3, "q/1.2": 0.7}
    )


@pytest.fixture
def joint_sample(corpus, x1_x2):
    """The uniform model's joint distribution (½, ½) written out as an explicit combined sample."""
    x1, x2 = x1_x2
    queries = [corpus[0], corpus[2]]
    return SampleSet(queries, np.array([2.0, 1.0]), [[x1], [x2]], combined=[x1, x2])


def test_kernel_is_stochastic_and_reversible(uniform_model, bind_a, open_trees, skewed_proposal):
    target = uniform_model.extend(bind_a, LOG2)
    kernel = transition_matrix(open_trees, target, skewed_proposal)
    np.testing.assert_allclose(kernel.sum(axis=1), 1.0)
    assert np.all(kernel >= 0)
    p = exact_dist(target, open_trees).mass
    flow = p[:, None] * kernel
    np.testing.assert_allclose(flow, flow.T, atol=1e-12)
    np.testing.assert_allclose(p @ kernel, p, atol=1e-12)


@pytest.mark.slow
def test_chain_frequencies_match_the_target(uniform_model, bind_a, query_s, open_trees, depth, program):
    target = uniform_model.extend(bind_a, LOG2)
    rng = np.random.default_rng(2024)
    chain = mh_sample(query_s, target, ChoiceParams.uniform(program), 101_000, open_trees[1], rng, depth)
    assert len(chain) == 101_001
    kept = chain[1001:]
    share = Counter(kept)[open_trees[0]] / len(kept)
    assert share == pytest.approx(2 / 3, abs=0.01)


def choice_program(n):
    return parse_program("".join(f"p(Z) :- Z = a{i}.\n" for i in range(1, n + 1)))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_kernel_leaves_the_target_stationary_on_small_supports(data):
    n = data.draw(st.integers(min_value=2, max_value=5))
    weights = data.draw(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=n, max_size=n))
    raw = data.draw(st.lists(st.floats(min_value=0.1, max_value=1.0), min_size=n, max_size=n))
    program = choice_program(n)
    proposal = ChoiceParams.from_mapping(program, {f"p/1.{i + 1}": q / sum(raw) for i, q in enumerate(raw)})
    target = LogLinearModel.initial(program)
    for i, weight in enumerate(weights):
        target = target.extend(AnswerBinding((1,), constant(f"a{i + 1}")), weight)
    trees = enumerate_proofs(program, parse_query("p(Z)"), 3)
    assert len(trees) == n

    kernel = transition_matrix(trees, target, proposal)
    system = np.vstack([kernel.T - np.eye(n), np.ones(n)])
    rhs = np.append(np.zeros(n), 1.0)
    stationary, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    np.testing.assert_allclose(stationary, exact_dist(target, trees).mass, atol=1e-10)


@pytest.fixture
def matched_proposal(program):
    """Proposal equal to the uniform model with bind a at log 2, so every move is accepted."""
    return ChoiceParams.from_mapping(
        program, {"s/1.1": 1.0, "p/1.1": 2 / 3, "p/1.2": 1 / 3, "q/1.1": 0.5, "q/1.2": 0.5}
    )


@pytest.mark.slow
def test_chain_averages_converge(uniform_model, bind_a, query_s, open_trees, depth, matched_proposal):
    target = uniform_model.extend(bind_a, LOG2)
    rng = np.random.default_rng(11)
    chain = mh_sample(query_s, target, matched_proposal, 100_000, open_trees[1], rng, depth)[1:]
    bounds = []
    for size in (1_000, 10_000, 100_000):
        share = sum(tree == open_trees[0] for tree in chain[:size]) / size
        bound = 3 * math.sqrt((2 / 3) * (1 / 3) / size)
        assert abs(share - 2 / 3) <= bound
        bounds.append(bound)
    assert bounds == sorted(bounds, reverse=True)


def test_chain_rejects_bad_arguments(uniform_model, query_s, corpus, open_trees, depth, program):
    rng = np.random.default_rng(0)
    params = ChoiceParams.uniform(program)
    with pytest.raises(ValueError):
        mh_sample(query_s, uniform_model, params, 0, open_trees[0], rng, depth)
    with pytest.raises(ValueError):
        mh_sample(corpus[0], uniform_model, params, 5, open_trees[0], rng, depth)


def test_draw_samples_is_reproducible(uniform_model, corpus, program, depth):
    proposal = ChoiceParams.uniform(program)
    first = draw_samples(uniform_model, corpus, proposal, depth, samples=50, burnin=10, thin=2, seed=99)
    second = draw_samples(uniform_model, corpus, proposal, depth, samples=50, burnin=10, thin=2, seed=99)
    assert [[t.clause_ids for t in chain] for chain in first.chains] == [
        [t.clause_ids for t in chain] for chain in second.chains
    ]
    assert [len(chain) for chain in first.chains] == [50, 50]
    np.testing.assert_array_equal(first.multiplicity, [2.0, 1.0])
    assert first.corpus_size == 3.0
    assert first.combined_size == 150.0


def test_draw_samples_needs_a_proof(uniform_model, program, depth):
    with pytest.raises(NoProof):
        draw_samples(
            uniform_model, [parse_query("s(Z), Z = c")], ChoiceParams.uniform(program), depth,
            samples=5, burnin=0, thin=1, seed=1,
        )


def test_count_tables(joint_sample, uniform_model, bind_a, bind_b):
    tables = build_tables(joint_sample, uniform_model, [bind_a, bind_b])
    assert tables.S[bind_a] == Counter({1: 1.0, 0: 1.0})
    assert tables.T[0][bind_a] == Counter({1: 1})
    assert tables.corpus_size == 3.0
    assert tables.combined_size == 2.0
    assert t_y(tables, 0, bind_a) == 1.0
    assert observed_total(tables, bind_a) == 2.0
    assert s_r(tables, bind_a, 0.0, 0) == 2.0
    assert s_r(tables, bind_a, math.log(3), 1) == pytest.approx(3.0)


def test_sampled_newton_matches_the_exact_gain(joint_sample, uniform_model, bind_a):
    tables = build_tables(joint_sample, uniform_model, [bind_a])
    root = mc_newton_select(bind_a, tables)
    assert root.value == pytest.approx(math.log(4 / 3), abs=1e-8)
    assert mc_gain(bind_a, tables, root.value) == pytest.approx(2 * math.log(4 / 3) - 0.5, abs=1e-8)
    scored = mc_candidate(bind_a, tables)
    assert scored.key == "bind 1 a"
    assert not scored.degenerate


def test_sampled_newton_estimate_matches_the_first_im_step(joint_sample, uniform_model, bind_a):
    model = uniform_model.extend(bind_a, 0.0)
    tables = build_tables(joint_sample, model)
    assert mc_newton_estimate(0, tables).value == pytest.approx(0.0, abs=1e-10)
    assert mc_newton_estimate(1, tables).value == pytest.approx(0.5 * math.log(4 / 3), abs=1e-8)


def test_sampled_newton_skips_silent_properties(joint_sample, uniform_model, program):
    silent = AnswerBinding((1,), constant("c"))
    tables = build_tables(joint_sample, uniform_model.extend(silent, 0.0))
    assert mc_newton_estimate(1, tables) is None
    assert mc_candidate(silent, build_tables(joint_sample, uniform_model, [silent])).degenerate


def test_draw_samples_adds_an_open_chain(uniform_model, corpus, program, depth, query_s):
    proposal = ChoiceParams.uniform(program)
    joint = draw_samples(uniform_model, corpus, proposal, depth, samples=20, burnin=5, thin=1, seed=3)
    assert len(joint.joint_chains) == 1
    assert joint.joint_weights == [3.0]
    assert all(tree.query == query_s for tree in joint.joint_chains[0])
    conditional = draw_samples(
        uniform_model, corpus, proposal, depth, samples=20, burnin=5, thin=1, seed=3, combined="corpus"
    )
    assert conditional.joint_chains == []
    assert conditional.combined_size == 60.0
    with pytest.raises(ValueError, match="combined"):
        draw_samples(uniform_model, corpus, proposal, depth, samples=5, burnin=0, thin=1, seed=3, combined="all")


def test_corpus_recipe_sees_no_gain(uniform_model, corpus, program, depth, bind_a):
    sample = draw_samples(
        uniform_model, corpus, ChoiceParams.uniform(program), depth, samples=200, burnin=10, thin=1, seed=5,
        combined="corpus",
    )
    tables = build_tables(sample, uniform_model, [bind_a])
    root = mc_newton_select(bind_a, tables)
    assert root.value == pytest.approx(0.0, abs=1e-8)
    assert mc_gain(bind_a, tables, root.value) == pytest.approx(0.0, abs=1e-8)


@pytest.fixture
def large_joint_sample(uniform_model, corpus, program, depth):
    return draw_samples(
        uniform_model, corpus, ChoiceParams.uniform(program), depth, samples=100_000, burnin=1000, thin=1, seed=7
    )


def joint_share(sample, tree):
    (chain,) = sample.joint_chains
    return sum(state == tree for state in chain) / len(chain)


@pytest.mark.slow
def test_sampled_newton_converges_on_the_open_query(large_joint_sample, uniform_model, bind_a, x1_x2):
    share = joint_share(large_joint_sample, x1_x2[0])
    error = math.sqrt((1 - share) / (share * 100_000))

    tables = build_tables(large_joint_sample, uniform_model, [bind_a])
    assert tables.combined_size == 300_000.0
    root = mc_newton_select(bind_a, tables)
    assert abs(root.value - math.log(4 / 3)) <= 3 * error

    step = mc_newton_estimate(1, build_tables(large_joint_sample, uniform_model.extend(bind_a, 0.0)))
    assert abs(step.value - 0.5 * math.log(4 / 3)) <= 1.5 * error


@pytest.mark.slow
def test_sampled_selection_is_consistent(uniform_model, corpus, program, depth, bind_a, x1_x2):
    for size in (1_000, 10_000, 100_000):
        sample = draw_samples(
            uniform_model, corpus, ChoiceParams.uniform(program), depth, samples=size, burnin=1000, thin=1, seed=13
        )
        share = joint_share(sample, x1_x2[0])
        root = mc_newton_select(bind_a, build_tables(sample, uniform_model, [bind_a]))
        assert abs(root.value - math.log(4 / 3)) <= 3 * math.sqrt((1 - share) / (share * size))
