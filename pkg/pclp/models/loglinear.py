"""
Log-linear distributions over proof trees.

p(x) = Z⁻¹ · exp(Σ_i λ_i ν_i(x)) · p₀(x), where p₀ is the stochastic
context-free derivation model and Z normalizes over the enumerated support.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from pydantic_core import core_schema

from ..clp import Program, ProofTree, Query, enumerate_proofs
from ..errors import NoProof
from .distribution import TreeDistribution, reweight_distribution
from .properties import ROOT, Property, RootProperty
from .scf import ChoiceParams, scf_log_prob
from .space import TreeSpace


@dataclass(frozen=True)
class LogLinearModel:
    """Properties with one log-parameter each; the root property sits at index 0."""

    properties: Tuple[Property, ...]
    weights: Tuple[float, ...]
    base: ChoiceParams

    def __post_init__(self):
        if len(self.properties) != len(self.weights):
            raise ValueError("one weight per property is required")
        if not self.properties or not isinstance(self.properties[0], RootProperty):
            raise ValueError("the root property must come first")
        if len(set(self.properties)) != len(self.properties):
            raise ValueError("duplicate properties in model")

    # pydantic models holding a model check the type only
    @classmethod
    def __get_pydantic_core_schema__(cls, source, handler):
        return core_schema.is_instance_schema(cls)

    @classmethod
    def initial(cls, program: Program, base: ChoiceParams = None) -> "LogLinearModel":
        return cls((ROOT,), (0.0,), base or ChoiceParams.uniform(program))

    @property
    def program(self) -> Program:
        return self.base.program

    @property
    def lambdas(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)

    def with_weights(self, weights: Iterable[float]) -> "LogLinearModel":
        return LogLinearModel(self.properties, tuple(float(w) for w in weights), self.base)

    def extend(self, prop: Property, weight: float = 0.0) -> "LogLinearModel":
        return LogLinearModel(self.properties + (prop,), self.weights + (float(weight),), self.base)

    def drop(self, indices: Iterable[int]) -> "LogLinearModel":
        dropped = set(indices)
        if 0 in dropped:
            raise ValueError("the root property cannot be dropped")
        kept = [i for i in range(len(self.properties)) if i not in dropped]
        return LogLinearModel(
            tuple(self.properties[i] for i in kept), tuple(self.weights[i] for i in kept), self.base
        )

    def weight_of(self, prop: Property) -> float:
        return self.weights[self.properties.index(prop)]

    def __contains__(self, prop: Property) -> bool:
        return prop in self.properties

    def __len__(self) -> int:
        return len(self.properties)


def unnormalized_log_weight(model: LogLinearModel, tree: ProofTree) -> float:
    """λ·ν(x) + log p₀(x)."""
    score = sum(weight * prop.count(tree) for prop, weight in zip(model.properties, model.weights))
    return float(score) + scf_log_prob(model.base, tree)


def unnormalized_weight(model: LogLinearModel, tree: ProofTree) -> float:
    return math.exp(unnormalized_log_weight(model, tree))


def space_log_weights(model: LogLinearModel, space: TreeSpace) -> np.ndarray:
    """Unnormalized log weights of every tree in the space."""
    return space.count_matrix(model.properties) @ model.lambdas + space.log_base(model.base)


def exact_dist(model: LogLinearModel, trees: Sequence[ProofTree]) -> TreeDistribution:
    """The model normalized over ``trees``."""
    log_weights = np.array([unnormalized_log_weight(model, tree) for tree in trees])
    return TreeDistribution.from_log_weights(trees, log_weights)


def space_log_likelihood(model: LogLinearModel, space: TreeSpace) -> float:
    return space.log_likelihood(space_log_weights(model, space))


def log_likelihood(model: LogLinearModel, corpus: Sequence[Query], program: Program, depth: int) -> float:
    """
    L = Σ_y log Σ_{x∈X_D(y)} p(x) with p normalized over the union of the
    queries' trees. Raises NoProof when a query has no tree.
    """
    if not corpus:
        return 0.0
    return space_log_likelihood(model, TreeSpace(program, corpus, depth))


def conditional(model: LogLinearModel, query: Query, program: Program, depth: int) -> TreeDistribution:
    """The model renormalized over the proofs of a single query."""
    trees = enumerate_proofs(program, query, depth)
    if not trees:
        raise NoProof(query, depth)
    return exact_dist(model, trees)


def extend_model(
    model: LogLinearModel, properties: Sequence[Property], weights: Sequence[float]
) -> LogLinearModel:
    """Append properties with their parameters."""
    extended = model
    for prop, weight in zip(properties, weights):
        extended = extended.extend(prop, weight)
    return extended


def extension_by_reweighting(
    model: LogLinearModel, properties: Sequence[Property], weights: Sequence[float], trees: Sequence[ProofTree]
) -> TreeDistribution:
    """
    The extended model computed the other way round: the normalized base model
    reweighted by exp(γ·μ) and normalized again. Equals
    ``exact_dist(extend_model(...), trees)``.
    """
    base = exact_dist(model, trees)
    factors = np.array(
        [sum(w * prop.count(tree) for prop, w in zip(properties, weights)) for tree in base.support],
        dtype=float,
    )
    return reweight_distribution(base, factors)
