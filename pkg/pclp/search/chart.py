"""
Earley deduction over constraint logic programs.

An item is a derived clause ``H <- B & phi``: the head is either an ordinary
atom or the reserved query head, the body holds the atoms still to be proved
left to right, and ``phi`` is the solved constraint projected onto the head and
body variables. Items are identified up to variable renaming together with the
number of program clauses they consumed (``depth``) and their nesting below the
query (``level``). Both counters are bounded by the depth bound, which keeps the
chart finite even for programs whose constraints grow with recursion.

Every way an item was produced is kept as a hyperedge so that weighted searches
can later pick the best derivation per item.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, Iterator, List, Optional, Tuple

from ..clp import Atom, Clause, ClauseId, Program, Query, variant_for
from ..errors import NotApplicable
from ..terms import SolvedForm, Variable, conjoin, renaming_for, solve
from ..terms.term import ordered_union

logger = logging.getLogger(__name__)

QUERY_PREDICATE = "?"


@dataclass(frozen=True)
class Item:
    id: int
    head: Atom
    body: Tuple[Atom, ...]
    constraint: SolvedForm
    depth: int
    level: int

    @property
    def is_passive(self) -> bool:
        return not self.body

    @property
    def is_query(self) -> bool:
        return self.head.predicate == QUERY_PREDICATE

    @property
    def selected(self) -> Optional[Atom]:
        return self.body[0] if self.body else None

    def variables(self) -> Tuple[Variable, ...]:
        return ordered_union(
            [self.head.variables()] + [atom.variables() for atom in self.body] + [self.constraint.variables()]
        )

    @property
    def key(self) -> Tuple[str, int, int]:
        """Variant key: the item printed under a canonical renaming, plus its counters."""
        renaming = {var: Variable(f"_V{index}") for index, var in enumerate(self.variables())}
        head = self.head.rename(renaming)
        body = " & ".join(str(atom.rename(renaming)) for atom in self.body)
        return f"{head} <- {body} {self.constraint.rename(renaming)}", self.depth, self.level

    def __str__(self) -> str:
        body = ", ".join(str(atom) for atom in self.body) or "true"
        return f"[{self.id}] {self.head} <- {body} {self.constraint} (depth {self.depth}, level {self.level})"


@dataclass(frozen=True)
class Derivation:
    """
    One hyperedge into an item. ``kind`` is ``axiom`` (the query item),
    ``predict`` (``clause_id`` expanded under ``left``) or ``complete``
    (active ``left`` combined with passive ``right``).
    """

    kind: str
    clause_id: Optional[ClauseId] = None
    left: Optional[int] = None
    right: Optional[int] = None


def _project(head: Atom, body: Tuple[Atom, ...], constraint: SolvedForm) -> SolvedForm:
    return constraint.restrict(ordered_union([head.variables()] + [atom.variables() for atom in body]))


def query_item(query: Query) -> Item:
    """The chart's axiom ``?(vars) <- atoms & constraint``; raises NotApplicable when unsatisfiable."""
    solved = solve(query.constraint)
    if solved is None:
        raise NotApplicable(f"query constraint of '{query}' is unsatisfiable")
    head = Atom(QUERY_PREDICATE, query.variables)
    return Item(-1, head, query.atoms, _project(head, query.atoms, solved), depth=0, level=0)


def predict(item: Item, clause: Clause, item_id: int = -1) -> Item:
    """
    Expand the selected atom ``C`` of an active item with ``clause``: the result
    is ``C <- body & (phi|C ∧ clause constraint)``.
    """
    if item.is_passive:
        raise NotApplicable(f"prediction needs an active item, got {item}")
    selected = item.selected
    if selected.indicator != clause.head.indicator:
        raise NotApplicable(f"clause {clause.id} does not define {selected.indicator}")
    caller = item.constraint.restrict(selected.args)
    avoid = {var.name for var in ordered_union([selected.args, caller.variables()])}
    variant = variant_for(selected, clause, avoid)
    solved = conjoin(caller, variant.body_constraint)
    if solved is None:
        raise NotApplicable(f"clause {clause.id} is inconsistent with {caller}")
    body = variant.body_atoms
    return Item(item_id, selected, body, _project(selected, body, solved), depth=1, level=item.level + 1)


def complete(active: Item, passive: Item, item_id: int = -1) -> Item:
    """
    Discharge the selected atom of ``active`` with a passive item for the same
    predicate. The passive item is renamed apart with its head mapped onto the
    selected atom.
    """
    if active.is_passive:
        raise NotApplicable(f"completion needs an active item, got {active}")
    if not passive.is_passive:
        raise NotApplicable(f"completion needs a passive item, got {passive}")
    selected = active.selected
    if passive.head.indicator != selected.indicator or passive.is_query:
        raise NotApplicable(f"{passive.head} does not complete {selected}")
    mapping = renaming_for(
        passive.variables(), active.variables(), dict(zip(passive.head.args, selected.args))
    )
    solved = conjoin(active.constraint, passive.constraint.rename(mapping).as_constraint())
    if solved is None:
        raise NotApplicable(f"{passive.constraint} is inconsistent with {active.constraint}")
    body = active.body[1:]
    return Item(
        item_id,
        active.head,
        body,
        _project(active.head, body, solved),
        depth=active.depth + passive.depth,
        level=active.level,
    )


class Chart:
    """
    Closure of the query item under prediction and completion.

    A passive item completes only callers one level above it, and an item is
    predicted only while its level stays within the depth bound.
    """

    def __init__(self, program: Program, query: Query, depth: int):
        if depth < 1:
            raise ValueError("depth bound must be at least 1")
        self.program = program
        self.query = query
        self.depth = depth
        self.items: List[Item] = []
        self.derivations: Dict[int, List[Derivation]] = {}
        self._index: Dict[Tuple[str, int, int], int] = {}
        self._waiting: Dict[Tuple[str, int], List[int]] = {}
        self._passive: Dict[Tuple[str, int], List[int]] = {}
        self._agenda: Deque[int] = deque()
        self._closed = False

    def _add(self, item: Item, derivation: Derivation) -> None:
        key = item.key
        existing = self._index.get(key)
        if existing is not None:
            self.derivations[existing].append(derivation)
            return
        item_id = len(self.items)
        item = Item(item_id, item.head, item.body, item.constraint, item.depth, item.level)
        self.items.append(item)
        self._index[key] = item_id
        self.derivations[item_id] = [derivation]
        self._agenda.append(item_id)

    def close(self) -> "Chart":
        if self._closed:
            return self
        try:
            self._add(query_item(self.query), Derivation("axiom"))
        except NotApplicable:
            logger.debug("query '%s' has an unsatisfiable constraint", self.query)
        while self._agenda:
            item = self.items[self._agenda.popleft()]
            if item.is_passive:
                self._complete_callers(item)
            else:
                self._expand(item)
        self._closed = True
        logger.debug("chart for '%s' closed with %d items", self.query, len(self.items))
        return self

    def _expand(self, item: Item) -> None:
        indicator = item.selected.indicator
        self._waiting.setdefault((indicator, item.level), []).append(item.id)
        if item.level + 1 <= self.depth and item.depth + 1 <= self.depth:
            for clause in self.program.alternatives(indicator):
                try:
                    self._add(predict(item, clause), Derivation("predict", clause.id, left=item.id))
                except NotApplicable:
                    continue
        for passive_id in list(self._passive.get((indicator, item.level + 1), ())):
            self._try_complete(item, self.items[passive_id])

    def _complete_callers(self, item: Item) -> None:
        if item.is_query:
            return
        indicator = item.head.indicator
        self._passive.setdefault((indicator, item.level), []).append(item.id)
        for active_id in list(self._waiting.get((indicator, item.level - 1), ())):
            self._try_complete(self.items[active_id], item)

    def _try_complete(self, active: Item, passive: Item) -> None:
        if active.depth + passive.depth > self.depth:
            return
        try:
            completed = complete(active, passive)
        except NotApplicable:
            return
        self._add(completed, Derivation("complete", left=active.id, right=passive.id))

    def passive_query_items(self) -> List[Item]:
        self.close()
        return [item for item in self.items if item.is_query and item.is_passive]

    def answers(self) -> List[Tuple[SolvedForm, int]]:
        """(canonical answer, depth) for every passive query item."""
        keep = self.query.variables
        return [(item.constraint.restrict(keep).canonical(keep), item.depth) for item in self.passive_query_items()]

    def topological(self) -> Iterator[Item]:
        """Items ordered so that every hyperedge's antecedents come first."""
        self.close()
        yield from sorted(self.items, key=lambda item: (item.depth, item.is_query, item.id))

    def __len__(self) -> int:
        return len(self.items)


def closure(program: Program, query: Query, depth: int) -> Chart:
    """The closed chart of ``query`` within ``depth`` clauses."""
    return Chart(program, query, depth).close()
