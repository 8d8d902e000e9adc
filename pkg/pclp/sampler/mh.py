"""
Metropolis-Hastings sampling over the proof trees of a query.

The proposal ("nominating") distribution is the stochastic derivation model,
sampled top-down with rejection; the target is a log-linear model restricted
to the query's proofs. Both enter only through unnormalized weights.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from ..clp import ProofTree, Query, first_proof
from ..errors import NoProof
from ..models import (
    ChoiceParams,
    DerivationSampler,
    LogLinearModel,
    distinct_queries,
    scf_log_prob,
    unnormalized_log_weight,
)
from ..utils.numeric import chain_generators

logger = logging.getLogger(__name__)


class _Scores:
    """Memoized unnormalized log weights under the target and the proposal."""

    def __init__(self, target: LogLinearModel, proposal: ChoiceParams):
        self.target = target
        self.proposal = proposal
        self._target: Dict[ProofTree, float] = {}
        self._proposal: Dict[ProofTree, float] = {}

    def log_target(self, tree: ProofTree) -> float:
        if tree not in self._target:
            self._target[tree] = unnormalized_log_weight(self.target, tree)
        return self._target[tree]

    def log_proposal(self, tree: ProofTree) -> float:
        if tree not in self._proposal:
            self._proposal[tree] = scf_log_prob(self.proposal, tree)
        return self._proposal[tree]

    def acceptance(self, x: ProofTree, z: ProofTree) -> float:
        """α_{x,z} = min(1, p(z)p'(x) / p(x)p'(z))."""
        log_ratio = (self.log_target(z) + self.log_proposal(x)) - (self.log_target(x) + self.log_proposal(z))
        return 1.0 if log_ratio >= 0 else math.exp(log_ratio)


def mh_sample(
    query: Query,
    target: LogLinearModel,
    proposal: ChoiceParams,
    k: int,
    x0: ProofTree,
    rng: np.random.Generator,
    depth: int,
    retry_budget: int = 10_000,
    sampler: Optional[DerivationSampler] = None,
) -> List[ProofTree]:
    """
    Run the chain for ``k`` steps from ``x0`` and return X_0..X_k. A proposal
    equal to the current state is kept without an acceptance draw.
    """
    if k < 1:
        raise ValueError("the chain needs at least one step")
    if x0.query != query:
        raise ValueError("initial state is not a proof of the query")
    sampler = sampler or DerivationSampler(proposal.program, proposal, depth, retry_budget)
    scores = _Scores(target, proposal)
    chain = [x0]
    for _ in range(k):
        x = chain[-1]
        z = sampler.sample(query, rng)
        if z == x:
            chain.append(x)
            continue
        u = rng.random()
        chain.append(z if u <= scores.acceptance(x, z) else x)
    return chain


def transition_matrix(trees: Sequence[ProofTree], target: LogLinearModel, proposal: ChoiceParams) -> np.ndarray:
    """
    The exact chain kernel on a finite support: P[x,z] = p'(z)·α_{x,z} for
    z ≠ x, the remaining mass on the diagonal.
    """
    scores = _Scores(target, proposal)
    log_q = np.array([scores.log_proposal(tree) for tree in trees])
    q = np.exp(log_q - logsumexp(log_q))
    n = len(trees)
    kernel = np.zeros((n, n))
    for i, x in enumerate(trees):
        for j, z in enumerate(trees):
            if i != j:
                kernel[i, j] = q[j] * scores.acceptance(x, z)
        kernel[i, i] = 1.0 - kernel[i].sum()
    return kernel


@dataclass
class SampleSet:
    """
    One conditional chain per distinct query plus the combined sample the
    normalizer-side sums run over. The combined sample is, in order of
    precedence: an explicit ``combined`` list (weight 1 per tree), the
    ``joint_chains`` drawn from open queries (each weighted by how many corpus
    queries share that open query), or the conditional chains themselves with
    every chain counted as often as its query occurs in the corpus.
    """

    queries: List[Query]
    multiplicity: np.ndarray
    chains: List[List[ProofTree]]
    combined: Optional[List[ProofTree]] = None
    joint_chains: List[List[ProofTree]] = field(default_factory=list)
    joint_weights: List[float] = field(default_factory=list)
    rejections: int = field(default=0)

    @property
    def corpus_size(self) -> float:
        return float(np.sum(self.multiplicity))

    def _weighted_chains(self):
        if self.joint_chains:
            return zip(self.joint_weights, self.joint_chains)
        return zip(self.multiplicity, self.chains)

    def combined_items(self):
        """``(tree, weight)`` pairs of the combined sample."""
        if self.combined is not None:
            for tree in self.combined:
                yield tree, 1.0
            return
        for weight, chain in self._weighted_chains():
            for tree in chain:
                yield tree, float(weight)

    @property
    def combined_size(self) -> float:
        if self.combined is not None:
            return float(len(self.combined))
        return float(sum(weight * len(chain) for weight, chain in self._weighted_chains()))


def unconstrained_query(query: Query) -> Query:
    """The query's atoms without its constraint; its proofs carry the joint p_λ."""
    return Query(query.atoms)


def _run_chain(
    query: Query,
    model: LogLinearModel,
    proposal: ChoiceParams,
    depth: int,
    rng: np.random.Generator,
    sampler: DerivationSampler,
    burnin: int,
    samples: int,
    thin: int,
    retry_budget: int,
) -> List[ProofTree]:
    x0 = first_proof(proposal.program, query, depth)
    if x0 is None:
        raise NoProof(query, depth)
    chain = mh_sample(query, model, proposal, burnin + samples * thin, x0, rng, depth, retry_budget, sampler)
    return chain[burnin + thin::thin][:samples]


def draw_samples(
    model: LogLinearModel,
    corpus: Sequence[Query],
    proposal: ChoiceParams,
    depth: int,
    samples: int,
    burnin: int,
    thin: int,
    seed: int,
    retry_budget: int = 10_000,
    key: Sequence[int] = (),
    combined: str = "joint",
) -> SampleSet:
    """
    One chain per distinct corpus query, each with its own generator derived
    from ``seed`` and ``key``. Keeps ``samples`` states after burn-in, every
    ``thin``-th. Chains start at the first proof found by leftmost search.

    With ``combined="joint"`` one more chain per distinct open query (the
    corpus queries' atoms without their constraints) supplies the combined
    sample; ``"corpus"`` reuses the conditional chains instead.
    """
    if combined not in ("joint", "corpus"):
        raise ValueError(f"unknown combined sample '{combined}'")
    queries, multiplicity = distinct_queries(corpus)
    groups: Dict[Query, float] = {}
    if combined == "joint":
        for query, weight in zip(queries, multiplicity):
            opened = unconstrained_query(query)
            groups[opened] = groups.get(opened, 0.0) + float(weight)

    generators = chain_generators(seed, len(queries) + len(groups), *key)
    sampler = DerivationSampler(proposal.program, proposal, depth, retry_budget)
    settings = dict(burnin=burnin, samples=samples, thin=thin, retry_budget=retry_budget)
    chains = [
        _run_chain(query, model, proposal, depth, rng, sampler, **settings)
        for query, rng in zip(queries, generators[: len(queries)])
    ]
    joint_chains = [
        _run_chain(query, model, proposal, depth, rng, sampler, **settings)
        for query, rng in zip(groups, generators[len(queries):])
    ]
    if sampler.rejections:
        logger.debug("proposal sampler rejected %d derivations", sampler.rejections)
    return SampleSet(
        queries,
        multiplicity,
        chains,
        joint_chains=joint_chains,
        joint_weights=list(groups.values()),
        rejections=sampler.rejections,
    )
