"""
Properties of proof trees and their counting functions.

Three kinds are supported: the always-on root property, bindings of query
arguments in the answer constraint, and connected clause-label subtrees.
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Optional, Tuple

from ..clp import Clause, ClauseId, ClauseNode, Program, ProofTree, parse_term
from ..errors import ModelFormatError, ProgramSyntaxError
from ..terms import Term, is_ground, subterm_at


class Property(ABC):
    """A countable feature of a proof tree."""

    kind: str = ""

    @abstractmethod
    def count(self, tree: ProofTree) -> int:
        """Number of occurrences of the property in ``tree``."""

    @abstractmethod
    def serialize(self) -> str:
        """Model-file form without the parameter."""

    def validate(self, program: Program) -> None:
        """Raise ModelFormatError when the property cannot occur in ``program``."""

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class RootProperty(Property):
    kind = "root"

    def count(self, tree: ProofTree) -> int:
        return 1

    def serialize(self) -> str:
        return "root"


ROOT = RootProperty()


@dataclass(frozen=True)
class AnswerBinding(Property):
    """
    Fires once when the answer binds the query's root-atom argument at ``path``
    to ``value``. ``path[0]`` is the 1-based argument position, the rest
    descends into the bound term.
    """

    path: Tuple[int, ...]
    value: Term
    kind = "bind"

    def __post_init__(self):
        if not self.path or any(position < 1 for position in self.path):
            raise ValueError(f"invalid argument path {self.path!r}")
        if not is_ground(self.value):
            raise ValueError(f"binding value {self.value} is not ground")

    def count(self, tree: ProofTree) -> int:
        root = tree.query.root_atom
        if root is None or self.path[0] > len(root.args):
            return 0
        bound = tree.answer.apply(root.args[self.path[0] - 1])
        return int(subterm_at(bound, self.path[1:]) == self.value)

    def serialize(self) -> str:
        return f"bind {'.'.join(str(p) for p in self.path)} {self.value}"


@dataclass(frozen=True)
class PatternNode:
    """
    One node of a subtree pattern. ``children`` is empty for a terminal node or
    has one entry per body atom of the clause; ``None`` entries are open slots.
    """

    clause_id: ClauseId
    children: Tuple[Optional["PatternNode"], ...] = ()

    def __post_init__(self):
        if self.children and all(child is None for child in self.children):
            object.__setattr__(self, "children", ())

    def matches(self, node: ClauseNode) -> bool:
        if node.clause_id != self.clause_id:
            return False
        if not self.children:
            return True
        if len(self.children) != len(node.children):
            return False
        return all(child is None or child.matches(sub) for child, sub in zip(self.children, node.children))

    @property
    def height(self) -> int:
        return 1 + max((child.height for child in self.children if child is not None), default=0)

    def clause_ids(self) -> Iterator[ClauseId]:
        yield self.clause_id
        for child in self.children:
            if child is not None:
                yield from child.clause_ids()

    def sexpr(self) -> str:
        inner = "".join(f" {'_' if child is None else child.sexpr()}" for child in self.children)
        return f"({self.clause_id.key}{inner})"

    def bracketed(self) -> str:
        inner = "".join(f" {'·' if child is None else child.bracketed()}" for child in self.children)
        return f"({self.clause_id.label}{inner})"

    def open_slots(self, program: Program, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], str]]:
        """Unexpanded child positions as ``(path to slot, predicate indicator)``."""
        clause = program.clause(self.clause_id.key)
        if clause is None:
            return
        for position, atom in enumerate(clause.body_atoms):
            child = self.children[position] if self.children else None
            if child is None:
                yield path + (position,), atom.indicator
            else:
                yield from child.open_slots(program, path + (position,))

    def with_child(self, path: Tuple[int, ...], node: "PatternNode", arity_of) -> "PatternNode":
        position = path[0]
        children = list(self.children) if self.children else [None] * arity_of(self.clause_id)
        if len(path) == 1:
            children[position] = node
        else:
            children[position] = children[position].with_child(path[1:], node, arity_of)
        return PatternNode(self.clause_id, tuple(children))


@dataclass(frozen=True)
class SubtreePattern(Property):
    """A connected clause-label subtree; counts every embedding in the tree."""

    root: PatternNode
    kind = "tree"

    def count(self, tree: ProofTree) -> int:
        return sum(1 for node in tree.nodes() if self.root.matches(node))

    def serialize(self) -> str:
        return f"tree {self.root.sexpr()}"

    @property
    def height(self) -> int:
        return self.root.height

    @property
    def is_single_node(self) -> bool:
        return not self.root.children

    def clause_ids(self) -> FrozenSet[ClauseId]:
        return frozenset(self.root.clause_ids())

    def validate(self, program: Program) -> None:
        def check(node: PatternNode) -> None:
            clause = program.clause(node.clause_id.key)
            if clause is None:
                raise ModelFormatError(f"unknown clause {node.clause_id.key} in pattern {self.root.sexpr()}")
            if node.children and len(node.children) != clause.arity:
                raise ModelFormatError(
                    f"clause {node.clause_id.key} has {clause.arity} body atoms, pattern gives {len(node.children)}"
                )
            for position, child in enumerate(node.children):
                if child is None:
                    continue
                if program.clause(child.clause_id.key) is None:
                    raise ModelFormatError(f"unknown clause {child.clause_id.key}")
                expected = clause.body_atoms[position].indicator
                if child.clause_id.indicator != expected:
                    raise ModelFormatError(
                        f"clause {child.clause_id.key} cannot expand {expected} under {node.clause_id.key}"
                    )
                check(child)

        check(self.root)

    def extensions(self, program: Program) -> Iterator["SubtreePattern"]:
        """Every pattern obtained by expanding one open slot with one applicable clause."""

        def arity_of(clause_id: ClauseId) -> int:
            return program.clause(clause_id.key).arity

        for path, indicator in self.root.open_slots(program):
            for clause in program.alternatives(indicator):
                yield SubtreePattern(self.root.with_child(path, PatternNode(clause.id), arity_of))


def single_node(clause: Clause) -> SubtreePattern:
    return SubtreePattern(PatternNode(clause.id))


_SEXPR_TOKEN = re.compile(r"\s*(\(|\)|_|[^\s()]+)")


def _parse_pattern(text: str, program: Program) -> PatternNode:
    tokens: List[str] = []
    index = 0
    while index < len(text):
        match = _SEXPR_TOKEN.match(text, index)
        if match is None:
            if text[index:].strip():
                raise ModelFormatError(f"cannot read pattern {text!r}")
            break
        tokens.append(match.group(1))
        index = match.end()

    def node(position: int) -> Tuple[PatternNode, int]:
        if position >= len(tokens) or tokens[position] != "(":
            raise ModelFormatError(f"expected '(' in pattern {text!r}")
        if position + 1 >= len(tokens):
            raise ModelFormatError(f"truncated pattern {text!r}")
        clause = program.clause(tokens[position + 1])
        if clause is None:
            raise ModelFormatError(f"unknown clause {tokens[position + 1]} in pattern {text!r}")
        position += 2
        children: List[Optional[PatternNode]] = []
        while position < len(tokens) and tokens[position] != ")":
            if tokens[position] == "_":
                children.append(None)
                position += 1
            else:
                child, position = node(position)
                children.append(child)
        if position >= len(tokens):
            raise ModelFormatError(f"unbalanced pattern {text!r}")
        return PatternNode(clause.id, tuple(children)), position + 1

    root, end = node(0)
    if end != len(tokens):
        raise ModelFormatError(f"trailing input in pattern {text!r}")
    return root


def parse_property(text: str, program: Program) -> Property:
    """Inverse of ``Property.serialize``, validated against the program."""
    text = text.strip()
    kind, _, rest = text.partition(" ")
    rest = rest.strip()
    if kind == "root" and not rest:
        return ROOT
    if kind == "bind":
        path_text, _, term_text = rest.partition(" ")
        try:
            path = tuple(int(part) for part in path_text.split("."))
            return AnswerBinding(path, parse_term(term_text.strip()))
        except (ValueError, ProgramSyntaxError) as exc:
            raise ModelFormatError(f"bad binding property {text!r}: {exc}") from exc
    if kind == "tree":
        prop = SubtreePattern(_parse_pattern(rest, program))
        prop.validate(program)
        return prop
    raise ModelFormatError(f"unknown property {text!r}")


def property_order(prop: Property) -> str:
    """Deterministic ordering key shared by candidate generation and selection."""
    return prop.serialize()
