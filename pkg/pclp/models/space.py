"""
The finite tree space of a corpus: X_D(y) for each distinct query and their union.

Exact estimation works on this space; everything is kept as numpy arrays indexed
by tree position so that normalizers and expectations are vector operations.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..clp import Program, ProofTree, Query, enumerate_proofs
from ..errors import NoProof
from .properties import Property
from .scf import ChoiceParams, scf_log_prob

logger = logging.getLogger(__name__)


def distinct_queries(corpus: Sequence[Query]) -> Tuple[List[Query], np.ndarray]:
    """Distinct queries in first-appearance order and how often each occurs."""
    counts: Dict[Query, int] = {}
    for query in corpus:
        counts[query] = counts.get(query, 0) + 1
    return list(counts), np.array(list(counts.values()), dtype=float)


class TreeSpace:
    """
    Distinct queries in first-appearance order with their multiplicities, the
    union of their proof trees, and per-query index arrays into that union.
    Each tree belongs to exactly one query, the one it was derived from.
    """

    def __init__(
        self,
        program: Program,
        corpus: Sequence[Query],
        depth: int,
        tree_limit: Optional[int] = None,
    ):
        self.program = program
        self.corpus = list(corpus)
        self.depth = depth

        self.queries, self.multiplicity = distinct_queries(self.corpus)

        self.trees: List[ProofTree] = []
        self.members: List[np.ndarray] = []
        for query in self.queries:
            proofs = enumerate_proofs(program, query, depth)
            if not proofs:
                raise NoProof(query, depth)
            start = len(self.trees)
            self.trees.extend(proofs)
            self.members.append(np.arange(start, len(self.trees)))

        if tree_limit is not None and len(self.trees) > tree_limit:
            logger.warning(
                "exact tree space has %d trees (limit %d); consider --mode mc", len(self.trees), tree_limit
            )
        self._counts: Dict[Property, np.ndarray] = {}
        self._base: Dict[ChoiceParams, np.ndarray] = {}

    @property
    def size(self) -> int:
        return len(self.trees)

    @property
    def corpus_size(self) -> float:
        return float(self.multiplicity.sum())

    def index_of(self, query: Query) -> int:
        return self.queries.index(query)

    def count_vector(self, prop: Property) -> np.ndarray:
        """ν(x) for every tree of the union, memoized per property."""
        if prop not in self._counts:
            self._counts[prop] = np.array([prop.count(tree) for tree in self.trees], dtype=float)
        return self._counts[prop]

    def count_matrix(self, properties: Sequence[Property]) -> np.ndarray:
        if not properties:
            return np.zeros((self.size, 0))
        return np.column_stack([self.count_vector(prop) for prop in properties])

    def log_base(self, params: ChoiceParams) -> np.ndarray:
        if params not in self._base:
            self._base[params] = np.array([scf_log_prob(params, tree) for tree in self.trees])
        return self._base[params]

    def joint(self, log_weights: np.ndarray) -> np.ndarray:
        """p over the union from unnormalized log weights."""
        return np.exp(log_weights - logsumexp(log_weights))

    def conditionals(self, log_weights: np.ndarray) -> List[np.ndarray]:
        """k over X_D(y) for each distinct query."""
        masses = []
        for index in self.members:
            local = log_weights[index]
            masses.append(np.exp(local - logsumexp(local)))
        return masses

    def log_likelihood(self, log_weights: np.ndarray) -> float:
        """Σ_y log Σ_{x∈X_D(y)} p(x), counting each query with its multiplicity."""
        if not self.queries:
            return 0.0
        log_z = logsumexp(log_weights)
        per_query = np.array([logsumexp(log_weights[index]) for index in self.members]) - log_z
        return float(np.dot(self.multiplicity, per_query))

    def joint_expectation(self, log_weights: np.ndarray, values: np.ndarray) -> np.ndarray:
        """p[f] for each column of ``values``."""
        return self.joint(log_weights) @ values

    def conditional_expectation(self, log_weights: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Σ_y k_y[f] with multiplicities, for each column of ``values``."""
        total = np.zeros(values.shape[1:]) if values.ndim > 1 else 0.0
        for weight, index, mass in zip(self.multiplicity, self.members, self.conditionals(log_weights)):
            total = total + weight * (mass @ values[index])
        return total
