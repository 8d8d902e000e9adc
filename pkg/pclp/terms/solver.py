"""
Constraint solver for conjunctions of Herbrand term equations, and variable renaming.
"""

import re
from collections import deque
from typing import Dict, Iterable, Optional, Protocol, Set, Tuple, TypeVar

from .term import Compound, Constraint, SolvedForm, Term, Variable

_TRAILING_DIGITS = re.compile(r"\d+$")


def solve(constraint: Constraint) -> Optional[SolvedForm]:
    """
    Return the most general idempotent unifier of ``constraint``, or ``None`` when it
    is unsatisfiable in the Herbrand universe (occurs check on).

    Equations are processed in order. For a variable-variable equation the
    right-hand variable is eliminated, so variables introduced later in a
    derivation are expressed through older ones.
    """
    triangular: Dict[Variable, Term] = {}
    pending = deque((eq.lhs, eq.rhs) for eq in constraint.equations)

    while pending:
        lhs, rhs = pending.popleft()
        lhs = _walk(lhs, triangular)
        rhs = _walk(rhs, triangular)
        if lhs == rhs:
            continue

        if isinstance(rhs, Variable):
            variable, value = rhs, lhs
        elif isinstance(lhs, Variable):
            variable, value = lhs, rhs
        else:
            if lhs.functor != rhs.functor or len(lhs.args) != len(rhs.args):
                return None
            pending.extendleft(reversed(list(zip(lhs.args, rhs.args))))
            continue

        if _occurs_resolved(variable, value, triangular):
            return None
        triangular[variable] = value

    resolved: Dict[Variable, Term] = {}
    for variable in triangular:
        resolved[variable] = _resolve(triangular[variable], triangular, resolved)
    return SolvedForm.from_mapping(resolved)


def conjoin(solved: SolvedForm, constraint: Constraint) -> Optional[SolvedForm]:
    """Solve ``solved ∧ constraint``."""
    if not constraint:
        return solved
    return solve(solved.as_constraint().conjoin(constraint))


def _walk(term: Term, bindings: Dict[Variable, Term]) -> Term:
    while isinstance(term, Variable) and term in bindings:
        term = bindings[term]
    return term


def _occurs_resolved(variable: Variable, term: Term, bindings: Dict[Variable, Term]) -> bool:
    stack = [term]
    while stack:
        current = _walk(stack.pop(), bindings)
        if isinstance(current, Variable):
            if current == variable:
                return True
        else:
            stack.extend(current.args)
    return False


def _resolve(term: Term, bindings: Dict[Variable, Term], cache: Dict[Variable, Term]) -> Term:
    if isinstance(term, Variable):
        if term in cache:
            return cache[term]
        if term not in bindings:
            return term
        value = _resolve(bindings[term], bindings, cache)
        cache[term] = value
        return value
    if not term.args:
        return term
    return Compound(term.functor, tuple(_resolve(arg, bindings, cache) for arg in term.args))


# ===== Renaming =====

R = TypeVar("R", bound="Renamable")


class Renamable(Protocol):
    def variables(self) -> Tuple[Variable, ...]: ...

    def rename(self: R, mapping: Dict[Variable, Term]) -> R: ...


def fresh_variable(variable: Variable, avoid: Set[str]) -> Variable:
    """Original name (trailing digits stripped) plus the smallest free numeric suffix."""
    base = _TRAILING_DIGITS.sub("", variable.name) or variable.name
    counter = 1
    while f"{base}{counter}" in avoid:
        counter += 1
    return Variable(f"{base}{counter}")


def renaming_for(
    variables: Iterable[Variable],
    avoid: Iterable[Variable],
    fixed: Optional[Dict[Variable, Variable]] = None,
) -> Dict[Variable, Variable]:
    """
    Injective renaming of ``variables`` away from ``avoid``.

    Entries of ``fixed`` are taken as given. Every other variable keeps its name
    unless the name is in ``avoid``, in which case it gets a fresh suffix.
    """
    variables = tuple(variables)
    mapping: Dict[Variable, Variable] = dict(fixed or {})
    blocked: Set[str] = {var.name for var in avoid}
    blocked.update(var.name for var in mapping.values())
    taken: Set[str] = blocked | {var.name for var in variables if var not in mapping}
    for variable in variables:
        if variable in mapping:
            continue
        if variable.name not in blocked:
            target = variable
        else:
            target = fresh_variable(variable, taken)
            taken.add(target.name)
        blocked.add(target.name)
        mapping[variable] = target
    return mapping


def rename_apart(item: R, avoid: Iterable[Variable]) -> R:
    """Return a variant of ``item`` whose variables are all outside ``avoid``."""
    return item.rename(renaming_for(item.variables(), avoid))
