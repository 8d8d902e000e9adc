import math

import pytest

from pclp.clp import enumerate_proofs
from pclp.fixtures import SAMPLE_DEPTH, open_query, sample_corpus, sample_program
from pclp.models import AnswerBinding, LogLinearModel, TreeSpace
from pclp.terms import constant

LOG2 = math.log(2)


@pytest.fixture
def program():
    return sample_program()


@pytest.fixture
def corpus():
    return sample_corpus()


@pytest.fixture
def depth():
    return SAMPLE_DEPTH


@pytest.fixture
def space(program, corpus, depth):
    return TreeSpace(program, corpus, depth)


@pytest.fixture
def query_s():
    return open_query()


@pytest.fixture
def x1_x2(space):
    """The two proof trees: x1 answers Z=a, x2 answers Z=b."""
    x1, x2 = space.trees
    return x1, x2


@pytest.fixture
def bind_a():
    return AnswerBinding((1,), constant("a"))


@pytest.fixture
def bind_b():
    return AnswerBinding((1,), constant("b"))


@pytest.fixture
def uniform_model(program):
    return LogLinearModel.initial(program)


@pytest.fixture
def open_trees(program, query_s, depth):
    return enumerate_proofs(program, query_s, depth)
