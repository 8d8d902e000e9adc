"""
Exact Iterative Maximization and candidate gains on an enumerated tree space.

For a model with counts ν and ν_#(x) = Σ_i ν_i(x), the auxiliary function

    A(γ+λ) = Σ_y (1 + k_y[γ·ν] − p[Σ_i ν̄_i e^{γ_i ν_#}])

bounds the log-likelihood improvement from below. Each IM step maximizes A
coordinate-wise (all coordinates from the same λ), and the gain of a candidate
property c is the one-parameter analogue

    G_c(α+λ) = Σ_y (1 + k_y[α c] − p[e^{α c}]).
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import logsumexp

from ..clp import Query
from ..models import LogLinearModel, Property, TreeSpace, space_log_likelihood, space_log_weights
from .newton import RootResult, solve_decreasing

logger = logging.getLogger(__name__)

CorpusOrSpace = Union[Sequence[Query], TreeSpace]


def as_space(model: LogLinearModel, corpus: CorpusOrSpace, depth: Optional[int]) -> TreeSpace:
    if isinstance(corpus, TreeSpace):
        return corpus
    if depth is None:
        raise ValueError("a depth bound is required to enumerate the corpus")
    return TreeSpace(model.program, corpus, depth)


class Candidate(BaseModel):
    """A scored candidate property."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    property: Property
    gain: float
    alpha: float
    degenerate: bool = False
    iterations: int = 0
    method: str = Field(default="newton")
    # set when the gain was estimated from samples and the exact value is known
    exact_gain: Optional[float] = None

    @property
    def key(self) -> str:
        return self.property.serialize()


class IMResult(BaseModel):
    """Fitted model, log-likelihood trace and convergence flag."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: LogLinearModel
    trace: List[float]
    converged: bool
    iterations: int
    dropped: List[Property] = Field(default_factory=list)

    @property
    def log_likelihood(self) -> float:
        return self.trace[-1]


def _log_expect(log_p: np.ndarray, exponent: np.ndarray, weights: np.ndarray) -> float:
    """log p[weights · e^{exponent}] for non-negative weights; -inf when all are zero."""
    if not np.any(weights > 0):
        return -np.inf
    return float(logsumexp(log_p + exponent, b=weights))


class _Quantities:
    """Counts and probabilities of one model on one space, shared by A, IM and gains."""

    def __init__(self, model: LogLinearModel, space: TreeSpace):
        self.model = model
        self.space = space
        self.counts = space.count_matrix(model.properties)
        self.total = self.counts.sum(axis=1)
        log_weights = space_log_weights(model, space)
        self.log_p = np.log(space.joint(log_weights))
        self.log_weights = log_weights
        self.corpus_size = space.corpus_size

    def observed(self, values: np.ndarray) -> np.ndarray:
        """Σ_y k_y[values] with multiplicities."""
        return self.space.conditional_expectation(self.log_weights, values)


def aux_A(gamma: Sequence[float], model: LogLinearModel, corpus: CorpusOrSpace, depth: Optional[int] = None) -> float:
    """The auxiliary function at γ+λ, evaluated exactly."""
    space = as_space(model, corpus, depth)
    q = _Quantities(model, space)
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (len(model),):
        raise ValueError("one γ entry per model property is required")
    observed = q.observed(q.counts @ gamma)
    shares = q.counts / q.total[:, None]
    bound = np.exp(q.log_p) @ (shares * np.exp(np.outer(q.total, gamma))).sum(axis=1)
    return float(q.corpus_size + observed - q.corpus_size * bound)


def _coordinate_residuals(q: _Quantities, index: int):
    target = float(q.observed(q.counts[:, index]))
    weights = q.counts[:, index]
    slope_weights = weights * q.total
    scale = q.corpus_size

    def f(g: float) -> float:
        return target - scale * np.exp(_log_expect(q.log_p, g * q.total, weights))

    def fprime(g: float) -> float:
        return -scale * np.exp(_log_expect(q.log_p, g * q.total, slope_weights))

    return f, fprime


def im_gamma(
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    depth: Optional[int] = None,
    max_iter: int = 50,
    tol: float = 1e-10,
    bracket: float = 30.0,
) -> np.ndarray:
    """
    γ̂ solving Σ_y k_y[ν_i] = Σ_y p[ν_i e^{γ_i ν_#}] for every coordinate.
    Coordinates whose property never fires get 0.
    """
    q = _Quantities(model, as_space(model, corpus, depth))
    gamma = np.zeros(len(model))
    for index in range(len(model)):
        if not np.any(q.counts[:, index] > 0):
            continue
        f, fprime = _coordinate_residuals(q, index)
        gamma[index] = solve_decreasing(f, fprime, 0.0, max_iter, tol, bracket, index).value
    return gamma


def im_step(
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    depth: Optional[int] = None,
    max_iter: int = 50,
    tol: float = 1e-10,
    bracket: float = 30.0,
) -> LogLinearModel:
    """One Iterative Maximization step: λ + γ̂."""
    gamma = im_gamma(model, corpus, depth, max_iter, tol, bracket)
    return model.with_weights(model.lambdas + gamma)


def drop_silent_properties(model: LogLinearModel, space: TreeSpace) -> Tuple[LogLinearModel, List[Property]]:
    """Remove properties that fire on no tree of the space."""
    silent = [
        index
        for index, prop in enumerate(model.properties)
        if index > 0 and not np.any(space.count_vector(prop) > 0)
    ]
    for index in silent:
        logger.warning("dropping property '%s': it occurs in no proof tree of the corpus", model.properties[index])
    return model.drop(silent), [model.properties[index] for index in silent]


def im_estimate(
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    depth: Optional[int] = None,
    tol: float = 1e-9,
    max_iters: int = 1000,
    newton_max_iter: int = 50,
    newton_tol: float = 1e-10,
    bracket: float = 30.0,
) -> IMResult:
    """Iterate IM steps until |ΔL| < tol or ``max_iters`` steps."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    space = as_space(model, corpus, depth)
    model, dropped = drop_silent_properties(model, space)
    trace = [space_log_likelihood(model, space)]
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        model = im_step(model, space, None, newton_max_iter, newton_tol, bracket)
        trace.append(space_log_likelihood(model, space))
        if abs(trace[-1] - trace[-2]) < tol:
            converged = True
            break
    if not converged:
        logger.warning("IM stopped after %d iterations without reaching |ΔL| < %g", iterations, tol)
    return IMResult(model=model, trace=trace, converged=converged, iterations=iterations, dropped=dropped)


def gain_function(prop: Property, model: LogLinearModel, corpus: CorpusOrSpace, depth: Optional[int] = None):
    """G_c(α+λ) as a callable of α."""
    space = as_space(model, corpus, depth)
    q = _Quantities(model, space)
    values = space.count_vector(prop)
    observed = float(q.observed(values))

    def g(alpha: float) -> float:
        return float(q.corpus_size + alpha * observed - q.corpus_size * np.exp(logsumexp(q.log_p + alpha * values)))

    return g


def gain(
    prop: Property,
    model: LogLinearModel,
    corpus: CorpusOrSpace,
    depth: Optional[int] = None,
    max_iter: int = 50,
    tol: float = 1e-10,
    bracket: float = 30.0,
) -> Candidate:
    """
    The maximal approximate gain of adding ``prop``. A property with the same
    count on every tree is degenerate: α̂ = 0 and gain 0.
    """
    space = as_space(model, corpus, depth)
    values = space.count_vector(prop)
    if values.size == 0 or np.all(values == values[0]):
        logger.debug("candidate '%s' is constant on the tree space", prop)
        return Candidate(property=prop, gain=0.0, alpha=0.0, degenerate=True, method="degenerate")

    q = _Quantities(model, space)
    target = float(q.observed(values))
    scale = q.corpus_size

    def f(a: float) -> float:
        return target - scale * np.exp(_log_expect(q.log_p, a * values, values))

    def fprime(a: float) -> float:
        return -scale * np.exp(_log_expect(q.log_p, a * values, values * values))

    root: RootResult = solve_decreasing(f, fprime, 0.0, max_iter, tol, bracket, prop.serialize())
    value = gain_function(prop, model, space)(root.value)
    return Candidate(
        property=prop, gain=value, alpha=root.value, degenerate=False, iterations=root.iterations, method=root.method
    )
