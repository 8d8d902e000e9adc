"""
Definite clause programs, queries and goals.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Tuple

from ..terms import TRUE, Constraint, SolvedForm, Term, Variable, solve
from ..terms.term import ordered_union


@dataclass(frozen=True)
class Atom:
    """Relational atom ``r(X1,...,Xn)`` over pairwise-distinct variables."""

    predicate: str
    args: Tuple[Variable, ...] = ()

    @property
    def indicator(self) -> str:
        return f"{self.predicate}/{len(self.args)}"

    def variables(self) -> Tuple[Variable, ...]:
        return self.args

    def rename(self, mapping: Mapping[Variable, Term]) -> "Atom":
        return Atom(self.predicate, tuple(mapping.get(arg, arg) for arg in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True, order=True)
class ClauseId:
    """
    (choice, alternative) pair. ``choice_index`` is the position of the head
    predicate among the program's predicates, so ids sort in file order.
    """

    choice_index: int
    alternative: int
    indicator: str = field(compare=False)

    @property
    def key(self) -> str:
        """``pred/arity.j``, the form used in model files."""
        return f"{self.indicator}.{self.alternative}"

    @property
    def label(self) -> str:
        """Short form used in bracketed proof trees, e.g. ``21``."""
        return f"{self.choice_index}{self.alternative}"

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class Clause:
    id: ClauseId
    head: Atom
    body_atoms: Tuple[Atom, ...] = ()
    body_constraint: Constraint = TRUE

    @property
    def arity(self) -> int:
        """Number of body atoms, i.e. the number of children in a proof tree."""
        return len(self.body_atoms)

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union(
            [self.head.variables()]
            + [atom.variables() for atom in self.body_atoms]
            + [self.body_constraint.variables()]
        )

    def rename(self, mapping: Mapping[Variable, Term]) -> "Clause":
        return Clause(
            self.id,
            self.head.rename(mapping),
            tuple(atom.rename(mapping) for atom in self.body_atoms),
            self.body_constraint.rename(mapping),
        )

    def __str__(self) -> str:
        body = [str(atom) for atom in self.body_atoms] + [str(eq) for eq in self.body_constraint.equations]
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(body)}."


@dataclass(frozen=True)
class Program:
    clauses: Tuple[Clause, ...] = ()

    @cached_property
    def predicates(self) -> Tuple[str, ...]:
        """Head predicate indicators in order of first appearance."""
        seen: Dict[str, None] = {}
        for clause in self.clauses:
            seen.setdefault(clause.head.indicator, None)
        return tuple(seen)

    @cached_property
    def _by_indicator(self) -> Dict[str, Tuple[Clause, ...]]:
        grouped: Dict[str, list] = {}
        for clause in self.clauses:
            grouped.setdefault(clause.head.indicator, []).append(clause)
        return {indicator: tuple(group) for indicator, group in grouped.items()}

    @cached_property
    def _by_key(self) -> Dict[str, Clause]:
        return {clause.id.key: clause for clause in self.clauses}

    def alternatives(self, indicator: str) -> Tuple[Clause, ...]:
        return self._by_indicator.get(indicator, ())

    def clause(self, key: str) -> Optional[Clause]:
        return self._by_key.get(key)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __str__(self) -> str:
        return "\n".join(str(clause) for clause in self.clauses)


@dataclass(frozen=True)
class Goal:
    """
    Remaining atoms plus the solved constraint. ``reserved`` remembers every
    variable name used so far in the derivation so renamings never reuse one.
    """

    atoms: Tuple[Atom, ...]
    constraint: SolvedForm
    reserved: FrozenSet[str] = frozenset()

    @property
    def is_success(self) -> bool:
        return not self.atoms

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union([atom.variables() for atom in self.atoms] + [self.constraint.variables()])

    def __str__(self) -> str:
        parts = [str(atom) for atom in self.atoms]
        parts.extend(f"{var} = {value}" for var, value in self.constraint)
        return " & ".join(parts) if parts else "true"


@dataclass(frozen=True)
class Query:
    """A parsed query ``atoms & constraint``; ``text`` is its canonical rendering."""

    atoms: Tuple[Atom, ...]
    constraint: Constraint = TRUE

    @cached_property
    def text(self) -> str:
        parts = [str(atom) for atom in self.atoms] + [str(eq) for eq in self.constraint.equations]
        return ", ".join(parts)

    @cached_property
    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union([atom.variables() for atom in self.atoms] + [self.constraint.variables()])

    @property
    def root_atom(self) -> Optional[Atom]:
        return self.atoms[0] if self.atoms else None

    def goal(self) -> Optional[Goal]:
        """Initial goal, or ``None`` when the query constraint is unsatisfiable."""
        solved = solve(self.constraint)
        if solved is None:
            return None
        return Goal(self.atoms, solved, frozenset(var.name for var in self.variables))

    def __str__(self) -> str:
        return self.text
