"""
Exception hierarchy for the pclp engine.

Failed derivation branches and unsatisfiable constraints are ordinary values
(``None``); the exceptions below are reserved for conditions a caller has to act on.
"""

from typing import Optional


class PCLPError(Exception):
    """Base class for every error raised by pclp."""


class ProgramSyntaxError(PCLPError):
    """Ill-formed program, query or corpus text."""

    def __init__(self, message: str, line: int, column: int, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}line {line}, column {column}: {message}")


class ParameterFileError(PCLPError):
    """Malformed choice-parameter file or rows that do not sum to one."""


class ModelFormatError(PCLPError):
    """Malformed model file."""


class NoProof(PCLPError):
    """A query has no proof tree within the depth bound."""

    def __init__(self, query, depth: Optional[int] = None):
        self.query = query
        self.depth = depth
        bound = f" within depth {depth}" if depth is not None else ""
        super().__init__(f"no proof for query '{query}'{bound}")


class AllZero(PCLPError):
    """Every tree of a support has probability zero."""


class BudgetExhausted(PCLPError):
    """The rejection loop of the stochastic derivation sampler ran out of retries."""

    def __init__(self, query, retries: int):
        self.query = query
        self.retries = retries
        super().__init__(f"no successful derivation for '{query}' after {retries} attempts")


class NewtonDiverged(PCLPError):
    """Newton iterations did not reach the residual tolerance."""

    def __init__(self, index, iterations: int, residual: float):
        self.index = index
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"Newton iteration for coordinate {index} stopped after {iterations} steps "
            f"with residual {residual:.3e}"
        )


class NoCandidates(PCLPError):
    """Property selection was asked to choose from an empty candidate set."""


class NotApplicable(PCLPError):
    """An Earley prediction or completion does not apply to the given items."""


class ShapeMismatch(PCLPError):
    """Partial proof trees cannot be combined in the requested mode."""


class OverlappingProperties(PCLPError):
    """Subtree properties share clause nodes; best-proof search needs disjoint patterns."""


class NonFiniteEstimate(PCLPError):
    """A Monte-Carlo estimator overflowed."""


__all__ = [
    "PCLPError",
    "ProgramSyntaxError",
    "ParameterFileError",
    "ModelFormatError",
    "NoProof",
    "AllZero",
    "BudgetExhausted",
    "NewtonDiverged",
    "NoCandidates",
    "NotApplicable",
    "ShapeMismatch",
    "OverlappingProperties",
    "NonFiniteEstimate",
]
