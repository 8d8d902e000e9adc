"""
Herbrand terms, term equations and solved forms.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union


@dataclass(frozen=True)
class Variable:
    """A logic variable, identified by its name."""

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be non-empty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    """A function symbol applied to arguments; constants have no arguments."""

    functor: str
    args: Tuple["Term", ...] = ()

    def __post_init__(self):
        if not self.functor:
            raise ValueError("functor symbols must be non-empty")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(arg) for arg in self.args)})"


Term = Union[Variable, Compound]


def constant(name: str) -> Compound:
    return Compound(name, ())


def term_variables(term: Term) -> Tuple[Variable, ...]:
    """Variables of ``term`` in order of first occurrence."""
    seen: Dict[Variable, None] = {}
    stack = [term]
    while stack:
        current = stack.pop()
        if isinstance(current, Variable):
            seen.setdefault(current, None)
        else:
            stack.extend(reversed(current.args))
    return tuple(seen)


def occurs(variable: Variable, term: Term) -> bool:
    if isinstance(term, Variable):
        return term == variable
    return any(occurs(variable, arg) for arg in term.args)


def is_ground(term: Term) -> bool:
    if isinstance(term, Variable):
        return False
    return all(is_ground(arg) for arg in term.args)


def substitute(term: Term, mapping: Mapping[Variable, Term]) -> Term:
    """Apply ``mapping`` once (no chasing through the bound terms)."""
    if isinstance(term, Variable):
        return mapping.get(term, term)
    if not term.args:
        return term
    return Compound(term.functor, tuple(substitute(arg, mapping) for arg in term.args))


def subterm_at(term: Term, path: Tuple[int, ...]) -> Optional[Term]:
    """Follow a 1-based argument path; ``None`` when the path leaves the term."""
    current = term
    for position in path:
        if isinstance(current, Variable) or not 1 <= position <= len(current.args):
            return None
        current = current.args[position - 1]
    return current


def subterm_paths(term: Term, prefix: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], Term]]:
    """Yield ``(path, subterm)`` pairs in prefix order, the term itself first."""
    yield prefix, term
    if isinstance(term, Compound):
        for position, arg in enumerate(term.args, 1):
            yield from subterm_paths(arg, prefix + (position,))


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union((term_variables(self.lhs), term_variables(self.rhs)))

    def rename(self, mapping: Mapping[Variable, Term]) -> "Equation":
        return Equation(substitute(self.lhs, mapping), substitute(self.rhs, mapping))

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Constraint:
    """A conjunction of term equations; the empty conjunction is ``true``."""

    equations: Tuple[Equation, ...] = ()

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union(eq.variables() for eq in self.equations)

    def conjoin(self, other: "Constraint") -> "Constraint":
        return Constraint(self.equations + other.equations)

    def rename(self, mapping: Mapping[Variable, Term]) -> "Constraint":
        return Constraint(tuple(eq.rename(mapping) for eq in self.equations))

    def __bool__(self) -> bool:
        return bool(self.equations)

    def __str__(self) -> str:
        return ", ".join(str(eq) for eq in self.equations)


TRUE = Constraint(())


@dataclass(frozen=True)
class SolvedForm:
    """
    Idempotent most general unifier, kept sorted by variable name.

    No bound variable occurs on any right-hand side, so ``apply`` needs a single
    substitution pass.
    """

    bindings: Tuple[Tuple[Variable, Term], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Variable, Term]) -> "SolvedForm":
        return cls(tuple(sorted(mapping.items(), key=lambda item: item[0].name)))

    @cached_property
    def mapping(self) -> Dict[Variable, Term]:
        return dict(self.bindings)

    def get(self, variable: Variable) -> Optional[Term]:
        return self.mapping.get(variable)

    def __contains__(self, variable: Variable) -> bool:
        return variable in self.mapping

    def __len__(self) -> int:
        return len(self.bindings)

    def __iter__(self) -> Iterator[Tuple[Variable, Term]]:
        return iter(self.bindings)

    def apply(self, term: Term) -> Term:
        return substitute(term, self.mapping)

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union(
            (var,) + term_variables(value) for var, value in self.bindings
        )

    def as_constraint(self) -> Constraint:
        return Constraint(tuple(Equation(var, value) for var, value in self.bindings))

    def restrict(self, variables: Iterable[Variable]) -> "SolvedForm":
        keep = set(variables)
        return SolvedForm(tuple((var, value) for var, value in self.bindings if var in keep))

    def rename(self, mapping: Mapping[Variable, Variable]) -> "SolvedForm":
        renamed = {mapping.get(var, var): substitute(value, mapping) for var, value in self.bindings}
        return SolvedForm.from_mapping(renamed)

    def canonical(self, keep: Iterable[Variable]) -> "SolvedForm":
        """
        Rename every free variable outside ``keep`` to ``_G0, _G1, ...`` by first
        occurrence, so answers that differ only in fresh names compare equal.
        """
        kept = set(keep)
        renaming: Dict[Variable, Variable] = {}
        for _, value in self.bindings:
            for var in term_variables(value):
                if var not in kept and var not in renaming:
                    renaming[var] = Variable(f"_G{len(renaming)}")
        if not renaming:
            return self
        return SolvedForm(tuple((var, substitute(value, renaming)) for var, value in self.bindings))

    def __bool__(self) -> bool:
        return True

    def __str__(self) -> str:
        if not self.bindings:
            return "{}"
        return "{" + ", ".join(f"{var}={value}" for var, value in self.bindings) + "}"


def ordered_union(groups: Iterable[Tuple[Variable, ...]]) -> Tuple[Variable, ...]:
    seen: Dict[Variable, None] = {}
    for group in groups:
        for var in group:
            seen.setdefault(var, None)
    return tuple(seen)
