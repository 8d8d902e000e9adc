"""
Proof trees: the successful derivations of a query.
"""

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, List, Tuple

from pydantic_core import core_schema

from ..terms import SolvedForm
from .program import Clause, ClauseId, Goal, Query


@dataclass(frozen=True)
class ClauseNode:
    """A node of the clause-label tree; one child per body atom of the clause."""

    clause_id: ClauseId
    children: Tuple["ClauseNode", ...] = ()

    def walk(self) -> Iterator["ClauseNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def bracketed(self) -> str:
        inner = "".join(f" {child.bracketed()}" for child in self.children)
        return f"({self.clause_id.label}{inner})"


@dataclass(frozen=True)
class ProofTree:
    """
    A proof tree of ``query``. Identity is the query plus the clause sequence
    (leftmost selection makes that sequence a prefix-order walk of the clause
    tree); ``goals`` holds the relation node reached after each step and
    ``terminal`` the answer constraint before projection.
    """

    query: Query
    clause_ids: Tuple[ClauseId, ...]
    clauses: Tuple[Clause, ...] = field(compare=False, repr=False)
    goals: Tuple[Goal, ...] = field(compare=False, repr=False)
    terminal: SolvedForm = field(compare=False, repr=False, default=SolvedForm())

    @classmethod
    def __get_pydantic_core_schema__(cls, source, handler):
        return core_schema.is_instance_schema(cls)

    @property
    def depth(self) -> int:
        return len(self.clause_ids)

    @cached_property
    def answer(self) -> SolvedForm:
        return self.terminal.restrict(self.query.variables)

    @cached_property
    def skeleton(self) -> Tuple[ClauseNode, ...]:
        """One clause-label subtree per query atom."""
        roots: List[ClauseNode] = []
        index = 0
        for _ in self.query.atoms:
            node, index = self._build(index)
            roots.append(node)
        return tuple(roots)

    def _build(self, index: int) -> Tuple[ClauseNode, int]:
        clause = self.clauses[index]
        children: List[ClauseNode] = []
        index += 1
        for _ in range(clause.arity):
            child, index = self._build(index)
            children.append(child)
        return ClauseNode(clause.id, tuple(children)), index

    def nodes(self) -> Iterator[ClauseNode]:
        for root in self.skeleton:
            yield from root.walk()

    def bracketed(self) -> str:
        return " ".join(root.bracketed() for root in self.skeleton)

    @cached_property
    def tree_hash(self) -> str:
        payload = f"{self.query.text}|{' '.join(cid.key for cid in self.clause_ids)}"
        return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:12]

    def __str__(self) -> str:
        return f"{self.bracketed()} {self.answer}"


def answer(tree: ProofTree) -> SolvedForm:
    """Terminal constraint restricted to the query variables."""
    return tree.answer
