"""
Partial proof trees: clause-label trees with open slots.

A node is either expanded (it carries a clause id and one slot per body atom),
open (an atom still to be proved) or cut (a subtree below the truncation
height, kept only as a marker so truncated fragments compare equal).
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from ..clp import Clause, ClauseId, ClauseNode
from ..errors import ShapeMismatch
from ..models import PatternNode

OPEN, CUT = "open", "cut"


@dataclass(frozen=True)
class PartialProofTree:
    clause_id: Optional[ClauseId] = None
    children: Tuple["PartialProofTree", ...] = ()
    marker: Optional[str] = None

    @classmethod
    def open(cls) -> "PartialProofTree":
        return _OPEN

    @classmethod
    def cut(cls) -> "PartialProofTree":
        return _CUT

    @classmethod
    def predicted(cls, clause: Clause) -> "PartialProofTree":
        """A single expanded node whose body atoms are all open."""
        return cls(clause.id, (_OPEN,) * clause.arity)

    @classmethod
    def root(cls, slots: int) -> "PartialProofTree":
        """Unlabelled root holding one open slot per query atom."""
        return cls(None, (_OPEN,) * slots)

    @classmethod
    def from_node(cls, node: ClauseNode) -> "PartialProofTree":
        return cls(node.clause_id, tuple(cls.from_node(child) for child in node.children))

    @property
    def is_open(self) -> bool:
        return self.marker == OPEN

    @property
    def is_cut(self) -> bool:
        return self.marker == CUT

    @property
    def is_complete(self) -> bool:
        return not self.is_open and all(child.is_complete for child in self.children)

    def open_slots(self) -> int:
        if self.is_open:
            return 1
        return sum(child.open_slots() for child in self.children)

    def height(self) -> int:
        if self.marker is not None:
            return 0
        return 1 + max((child.height() for child in self.children), default=0)

    def truncate(self, height: int) -> "PartialProofTree":
        """Keep the top ``height`` levels of expanded nodes; deeper ones become cut markers."""
        if self.marker is not None:
            return self
        if height <= 0:
            return _CUT
        return PartialProofTree(self.clause_id, tuple(child.truncate(height - 1) for child in self.children))

    def fill_leftmost(self, subtree: "PartialProofTree") -> "PartialProofTree":
        """Replace the leftmost open slot in preorder with ``subtree``."""
        filled, done = self._fill(subtree)
        if not done:
            raise ShapeMismatch(f"no open slot in {self}")
        return filled

    def _fill(self, subtree: "PartialProofTree") -> Tuple["PartialProofTree", bool]:
        if self.is_open:
            return subtree, True
        children = list(self.children)
        for index, child in enumerate(children):
            filled, done = child._fill(subtree)
            if done:
                children[index] = filled
                return PartialProofTree(self.clause_id, tuple(children), self.marker), True
        return self, False

    def matches(self, pattern: PatternNode) -> bool:
        """True when ``pattern`` is rooted at this node; cut and open nodes never match a pattern node."""
        if self.marker is not None or self.clause_id != pattern.clause_id:
            return False
        for want, have in zip(pattern.children, self.children):
            if want is not None and not have.matches(want):
                return False
        return True

    def walk(self) -> Iterator["PartialProofTree"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def __str__(self) -> str:
        if self.is_open:
            return "·"
        if self.is_cut:
            return "…"
        label = self.clause_id.label if self.clause_id is not None else "?"
        inner = "".join(f" {child}" for child in self.children)
        return f"({label}{inner})"


_OPEN = PartialProofTree(marker=OPEN)
_CUT = PartialProofTree(marker=CUT)


def _merge(left: PartialProofTree, right: PartialProofTree) -> PartialProofTree:
    if left.is_open:
        return right
    if right.is_open:
        return left
    if left.marker != right.marker or left.clause_id != right.clause_id or len(left.children) != len(right.children):
        raise ShapeMismatch(f"cannot merge {left} with {right}")
    return PartialProofTree(
        left.clause_id, tuple(_merge(a, b) for a, b in zip(left.children, right.children)), left.marker
    )


def combine_trees(mode: str, first: PartialProofTree, second: PartialProofTree) -> PartialProofTree:
    """
    Combine two fragments.

    ``vertical``
        hang a freshly predicted node (all slots open) under the leftmost open
        slot of ``first``;
    ``substitute``
        fill the leftmost open slot of ``first`` with the complete fragment ``second``;
    ``merge``
        overlay two expansions of the same node; a position may be expanded in
        at most one of them unless both agree.
    """
    if mode == "vertical":
        if second.marker is not None or not all(child.is_open for child in second.children):
            raise ShapeMismatch(f"{second} is not a freshly predicted node")
        return first.fill_leftmost(second)
    if mode == "substitute":
        if not second.is_complete:
            raise ShapeMismatch(f"{second} still has open slots")
        return first.fill_leftmost(second)
    if mode == "merge":
        return _merge(first, second)
    raise ValueError(f"unknown combination mode '{mode}'")
