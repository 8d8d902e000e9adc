"""
Stochastic context-free derivation model over a program's clause choices.

Each predicate is a choice point and each of its clauses an alternative; the
probability of a proof tree is the product of the probabilities of the clauses
it uses. Besides the tree probability this module carries the expected rule
frequency reestimation and the top-down derivation sampler used as the
Metropolis-Hastings proposal.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..clp import ClauseId, Goal, Program, ProofTree, Query, enumerate_proofs, reduce
from ..errors import BudgetExhausted, NoProof, ParameterFileError
from ..utils.numeric import COMPARISON_TOL, format_parameter
from .distribution import TreeDistribution

logger = logging.getLogger(__name__)

CountVector = Counter


@dataclass(frozen=True)
class ChoiceParams:
    """
    Clause-choice probabilities keyed by clause key (``pred/arity.j``). Rows
    (all alternatives of one predicate) are non-negative and sum to one.
    """

    program: Program
    values: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        known = {clause.id.key for clause in self.program}
        given = dict(self.values)
        missing = sorted(known - set(given))
        if missing:
            raise ParameterFileError(f"no probability for clauses {', '.join(missing)}")
        unknown = sorted(set(given) - known)
        if unknown:
            raise ParameterFileError(f"unknown clauses {', '.join(unknown)}")
        for indicator in self.program.predicates:
            row = [given[clause.id.key] for clause in self.program.alternatives(indicator)]
            if any(value < 0 or not math.isfinite(value) for value in row):
                raise ParameterFileError(f"negative or non-finite probability for {indicator}")
            if abs(sum(row) - 1.0) > COMPARISON_TOL:
                raise ParameterFileError(f"probabilities of {indicator} sum to {sum(row)!r}")

    @classmethod
    def uniform(cls, program: Program) -> "ChoiceParams":
        values = []
        for indicator in program.predicates:
            alternatives = program.alternatives(indicator)
            values.extend((clause.id.key, 1.0 / len(alternatives)) for clause in alternatives)
        return cls(program, tuple(values))

    @classmethod
    def from_mapping(cls, program: Program, mapping: Mapping[str, float]) -> "ChoiceParams":
        """Build from ``{clause key: probability}``, listed in program order."""
        order = {clause.id.key: position for position, clause in enumerate(program)}
        keys = sorted(mapping, key=lambda key: (order.get(key, len(order)), key))
        return cls(program, tuple((key, float(mapping[key])) for key in keys))

    @cached_property
    def mapping(self) -> Dict[str, float]:
        return dict(self.values)

    @cached_property
    def log_mapping(self) -> Dict[str, float]:
        return {key: (math.log(value) if value > 0 else -math.inf) for key, value in self.values}

    def prob(self, clause_id: ClauseId) -> float:
        return self.mapping[clause_id.key]

    def log_prob(self, clause_id: ClauseId) -> float:
        return self.log_mapping[clause_id.key]

    def row(self, indicator: str) -> np.ndarray:
        return np.array([self.mapping[clause.id.key] for clause in self.program.alternatives(indicator)])

    def max_difference(self, other: "ChoiceParams") -> float:
        return max((abs(value - other.mapping[key]) for key, value in self.values), default=0.0)

    def __str__(self) -> str:
        return " ".join(f"{key}={value:.6g}" for key, value in self.values)


def clause_counts(tree: ProofTree) -> CountVector:
    """ν_ij(x): how often each clause labels a constraint node of the tree."""
    return Counter(clause_id.key for clause_id in tree.clause_ids)


def scf_log_prob(params: ChoiceParams, tree: ProofTree) -> float:
    return float(sum(params.log_prob(clause_id) for clause_id in tree.clause_ids))


def scf_prob(params: ChoiceParams, tree: ProofTree) -> float:
    """Product of the choice probabilities of the clauses used by ``tree``."""
    return math.exp(scf_log_prob(params, tree))


def normalized_tree_dist(params: ChoiceParams, trees: Sequence[ProofTree]) -> TreeDistribution:
    """The derivation model renormalized over ``trees``. Raises AllZero on zero total mass."""
    log_weights = np.array([scf_log_prob(params, tree) for tree in trees])
    return TreeDistribution.from_log_weights(trees, log_weights)


class ErfReport(BaseModel):
    """Expected clause frequencies for one reestimation step."""

    clause_keys: List[str]
    queries: List[str]
    rows: List[List[float]]
    totals: List[float]
    denominators: List[float]
    estimate: Dict[str, float] = Field(default_factory=dict)


def _proofs_by_query(
    corpus: Sequence[Query], program: Program, depth: int
) -> Dict[Query, List[ProofTree]]:
    proofs: Dict[Query, List[ProofTree]] = {}
    for query in corpus:
        if query not in proofs:
            trees = enumerate_proofs(program, query, depth)
            if not trees:
                raise NoProof(query, depth)
            proofs[query] = trees
    return proofs


def erf_table(params: ChoiceParams, corpus: Sequence[Query], program: Program, depth: int) -> ErfReport:
    """
    N_ij for every corpus query under the conditional weights p(x|y), plus
    column sums, per-choice denominators and the reestimated probabilities.
    Choices never used keep their previous probabilities.
    """
    keys = [clause.id.key for clause in program]
    proofs = _proofs_by_query(corpus, program, depth)

    expected: Dict[Query, np.ndarray] = {}
    for query, trees in proofs.items():
        conditional = normalized_tree_dist(params, trees)
        counts = np.array(
            [[clause_counts(tree).get(key, 0) for key in keys] for tree in conditional.support], dtype=float
        )
        expected[query] = conditional.mass @ counts

    rows = [expected[query] for query in corpus]
    totals = np.sum(rows, axis=0) if rows else np.zeros(len(keys))

    denominators = np.zeros(len(keys))
    estimate: Dict[str, float] = {}
    for indicator in program.predicates:
        positions = [keys.index(clause.id.key) for clause in program.alternatives(indicator)]
        denominator = float(totals[positions].sum())
        denominators[positions] = denominator
        for position in positions:
            key = keys[position]
            estimate[key] = float(totals[position]) / denominator if denominator > 0 else params.mapping[key]

    return ErfReport(
        clause_keys=keys,
        queries=[query.text for query in corpus],
        rows=[row.tolist() for row in rows],
        totals=totals.tolist(),
        denominators=denominators.tolist(),
        estimate=estimate,
    )


def erf_reestimate(params: ChoiceParams, corpus: Sequence[Query], program: Program, depth: int) -> ChoiceParams:
    """One expected-rule-frequency step. Raises NoProof for an uncoverable query."""
    return ChoiceParams.from_mapping(program, erf_table(params, corpus, program, depth).estimate)


def erf_iterate(
    params: ChoiceParams,
    corpus: Sequence[Query],
    program: Program,
    depth: int,
    tol: float = 1e-12,
    max_iters: int = 100,
) -> Tuple[ChoiceParams, List[ChoiceParams]]:
    """Repeat reestimation until no probability moves by more than ``tol``."""
    trace = [params]
    for _ in range(max_iters):
        updated = erf_reestimate(params, corpus, program, depth)
        trace.append(updated)
        moved = updated.max_difference(params)
        params = updated
        if moved < tol:
            break
    else:
        logger.warning("reestimation did not reach a fixed point in %d iterations", max_iters)
    return params, trace


def corpus_likelihood(dist: TreeDistribution, corpus: Sequence[Query]) -> float:
    """∏_y Σ_{x∈X(y)} p(x) for a distribution over the union of the queries' trees."""
    mass_by_query: Dict[Query, float] = {}
    for tree, mass in zip(dist.support, dist.mass):
        mass_by_query[tree.query] = mass_by_query.get(tree.query, 0.0) + float(mass)
    return float(np.prod([mass_by_query.get(query, 0.0) for query in corpus]))


def expected_frequency_params(program: Program, trees: Sequence[ProofTree], masses: Iterable[float]) -> ChoiceParams:
    """
    π_ij ∝ Σ_x mass(x)·ν_ij(x). Choices the trees never use stay uniform.
    """
    totals: Counter = Counter()
    for tree, mass in zip(trees, masses):
        for key, count in clause_counts(tree).items():
            totals[key] += mass * count
    mapping: Dict[str, float] = {}
    for indicator in program.predicates:
        alternatives = program.alternatives(indicator)
        denominator = sum(totals[clause.id.key] for clause in alternatives)
        for clause in alternatives:
            if denominator > 0:
                mapping[clause.id.key] = totals[clause.id.key] / denominator
            else:
                mapping[clause.id.key] = 1.0 / len(alternatives)
    return ChoiceParams.from_mapping(program, mapping)


class DerivationSampler:
    """
    Top-down stochastic derivations with rejection. A derivation that fails or
    overruns the depth bound is restarted, so accepted trees follow the
    derivation model renormalized over the query's proofs.
    """

    _CACHE_LIMIT = 200_000

    def __init__(self, program: Program, params: ChoiceParams, depth: int, retry_budget: int = 10_000):
        self.program = program
        self.params = params
        self.depth = depth
        self.retry_budget = retry_budget
        self.rejections = 0
        self._cumulative = {
            indicator: np.cumsum(params.row(indicator)) for indicator in program.predicates
        }
        self._reduced: Dict[Tuple[Goal, ClauseId], Optional[Goal]] = {}

    def _reduce(self, goal: Goal, clause) -> Optional[Goal]:
        key = (goal, clause.id)
        if key not in self._reduced:
            if len(self._reduced) >= self._CACHE_LIMIT:
                self._reduced.clear()
            self._reduced[key] = reduce(goal, clause)
        return self._reduced[key]

    def _choose(self, indicator: str, rng: np.random.Generator) -> int:
        cumulative = self._cumulative[indicator]
        index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        return min(index, len(cumulative) - 1)

    def attempt(self, query: Query, start: Goal, rng: np.random.Generator) -> Optional[ProofTree]:
        """One stochastic derivation; ``None`` when it fails or runs too deep."""
        goal = start
        clauses = []
        goals = []
        while goal.atoms:
            if len(clauses) >= self.depth:
                return None
            indicator = goal.atoms[0].indicator
            alternatives = self.program.alternatives(indicator)
            if not alternatives:
                return None
            clause = alternatives[self._choose(indicator, rng)]
            goal = self._reduce(goal, clause)
            if goal is None:
                return None
            clauses.append(clause)
            goals.append(goal)
        return ProofTree(query, tuple(c.id for c in clauses), tuple(clauses), tuple(goals), goal.constraint)

    def sample(self, query: Query, rng: np.random.Generator) -> ProofTree:
        start = query.goal()
        if start is None:
            raise NoProof(query, self.depth)
        for _ in range(self.retry_budget):
            tree = self.attempt(query, start, rng)
            if tree is not None:
                return tree
            self.rejections += 1
        raise BudgetExhausted(query, self.retry_budget)


def sample_derivation(
    params: ChoiceParams,
    query: Query,
    depth: int,
    rng: np.random.Generator,
    retry_budget: int = 10_000,
) -> ProofTree:
    """Draw one proof tree of ``query`` from the renormalized derivation model."""
    return DerivationSampler(params.program, params, depth, retry_budget).sample(query, rng)


def read_choice_params(text: str, program: Program, source: Optional[str] = None) -> ChoiceParams:
    """Parse ``pred/arity <j> <prob>`` lines; ``%`` starts a comment."""
    mapping: Dict[str, float] = {}
    where = f"{source}: " if source else ""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParameterFileError(f"{where}line {number}: expected 'pred/arity j prob'")
        indicator, alternative, value = fields
        try:
            key = f"{indicator}.{int(alternative)}"
            probability = float(value)
        except ValueError as exc:
            raise ParameterFileError(f"{where}line {number}: {exc}") from exc
        if program.clause(key) is None:
            raise ParameterFileError(f"{where}line {number}: unknown clause {key}")
        mapping[key] = probability
    return ChoiceParams.from_mapping(program, mapping)


def write_choice_params(params: ChoiceParams) -> str:
    lines = []
    for clause in params.program:
        lines.append(f"{clause.id.indicator} {clause.id.alternative} {format_parameter(params.prob(clause.id))}")
    return "\n".join(lines) + ("\n" if lines else "")
