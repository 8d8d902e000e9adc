"""
The built-in sample program and corpus used by ``pclp eval`` and the tests.
"""

from typing import List

from .clp import Program, Query, parse_corpus, parse_program, parse_query

SAMPLE_PROGRAM = """\
s(Z) :- p(Z), q(Z).
p(Z) :- Z = a.
p(Z) :- Z = b.
q(Z) :- Z = a.
q(Z) :- Z = b.
"""

SAMPLE_CORPUS = """\
s(Z), Z = a
s(Z), Z = a
s(Z), Z = b
"""

SAMPLE_DEPTH = 5


def sample_program() -> Program:
    return parse_program(SAMPLE_PROGRAM, "<sample>")


def sample_corpus() -> List[Query]:
    return parse_corpus(SAMPLE_CORPUS, "<sample>")


def open_query() -> Query:
    """``s(Z)`` without a binding: both proof trees answer it."""
    return parse_query("s(Z)")
