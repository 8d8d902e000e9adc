"""
Estimator driven by Metropolis-Hastings samples.

Every selection and every IM iteration draws fresh chains from the current
model; seeds are derived from the master seed, the round and the iteration, so
a run is reproducible. The log-likelihood trace is still evaluated exactly on
the tree space, and every selected property also gets its exact gain, so that
exact and Monte-Carlo runs can be compared.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..induction import Candidate, IMResult, best_candidate, gain
from ..models import (
    ChoiceParams,
    LogLinearModel,
    Property,
    TreeSpace,
    expected_frequency_params,
    space_log_likelihood,
    space_log_weights,
)
from ..sampler import SampleSet, build_tables, draw_samples, mc_candidate, mc_newton_estimate
from .base_estimator import BaseEstimator

logger = logging.getLogger(__name__)

_SELECT, _ESTIMATE = 0, 1


class MonteCarloEstimator(BaseEstimator):
    def __init__(self, config: Optional[Dict[str, Any]] = None):
        super().__init__("mc", config)
        if self.config.get("seed") is None:
            raise ValueError("Monte-Carlo estimation requires a seed")

    def proposal(self, model: LogLinearModel, space: TreeSpace) -> ChoiceParams:
        """Uniform clause choices, or choices matched to the model's expected clause counts."""
        if self.config.get("proposal", "uniform") == "moments":
            masses = space.joint(space_log_weights(model, space))
            return expected_frequency_params(model.program, space.trees, masses)
        return ChoiceParams.uniform(model.program)

    def _draw(self, model: LogLinearModel, space: TreeSpace, key: Sequence[int]) -> SampleSet:
        return draw_samples(
            model,
            space.corpus,
            self.proposal(model, space),
            space.depth,
            samples=self.config.get("samples", 10_000),
            burnin=self.config.get("burnin", 1000),
            thin=self.config.get("thin", 1),
            seed=self.config["seed"],
            retry_budget=self.config.get("retry_budget", 10_000),
            key=key,
            combined=self.config.get("combined", "joint"),
        )

    def select(self, model: LogLinearModel, space: TreeSpace, candidates: Sequence[Property], round_index: int) -> Candidate:
        tables = build_tables(self._draw(model, space, (round_index, _SELECT)), model, candidates)
        scored = [
            mc_candidate(
                prop,
                tables,
                tol=self.config.get("mc_newton_tol", 1e-8),
                max_iter=self.config.get("mc_newton_max_iter", 50),
            )
            for prop in candidates
        ]
        chosen = best_candidate(scored)
        exact = gain(
            chosen.property,
            model,
            space,
            None,
            self.config.get("newton_max_iter", 50),
            self.config.get("newton_tol", 1e-10),
            self.config.get("bracket", 30.0),
        )
        self.log(
            "round %d: best '%s' estimated gain %.6g, exact gain %.6g (gap %.3g)",
            round_index,
            chosen.key,
            chosen.gain,
            exact.gain,
            chosen.gain - exact.gain,
        )
        return chosen.model_copy(update={"exact_gain": exact.gain})

    def estimate(self, model: LogLinearModel, space: TreeSpace, round_index: int) -> IMResult:
        tol = self.config.get("tol", 1e-6)
        max_iters = self.config.get("iters", 20)
        trace = [space_log_likelihood(model, space)]
        dropped: List[Property] = []
        converged = False
        iterations = 0
        for iterations in range(1, max_iters + 1):
            tables = build_tables(self._draw(model, space, (round_index, _ESTIMATE, iterations)), model)
            gamma = np.zeros(len(model))
            silent = []
            for index in range(len(model)):
                result = mc_newton_estimate(
                    index,
                    tables,
                    tol=self.config.get("mc_newton_tol", 1e-8),
                    max_iter=self.config.get("mc_newton_max_iter", 50),
                )
                if result is None:
                    silent.append(index)
                else:
                    gamma[index] = result.value
            model = model.with_weights(model.lambdas + gamma)
            if silent:
                dropped.extend(model.properties[index] for index in silent if index > 0)
                model = model.drop([index for index in silent if index > 0])
            trace.append(space_log_likelihood(model, space))
            if abs(trace[-1] - trace[-2]) < tol:
                converged = True
                break
        if not converged:
            logger.warning("Monte-Carlo IM stopped after %d iterations without reaching |ΔL| < %g", iterations, tol)
        self.log("round %d: %d sampled IM iterations, L = %.12g", round_index, iterations, trace[-1])
        return IMResult(model=model, trace=trace, converged=converged, iterations=iterations, dropped=dropped)
