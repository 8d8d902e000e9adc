"""
Regression checks on the built-in sample program.

Each check recomputes a known quantity (estimation table, likelihoods, IM step,
gain, selection, induction endpoint, best proof) and compares it with its
expected value under a per-check tolerance.
"""

import logging
import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..clp import enumerate_proofs
from ..fixtures import SAMPLE_DEPTH, open_query, sample_corpus, sample_program
from ..graph import induce
from ..induction import gain, im_estimate, im_gamma, select_property
from ..models import (
    AnswerBinding,
    ChoiceParams,
    LogLinearModel,
    TreeDistribution,
    TreeSpace,
    corpus_likelihood,
    erf_table,
    exact_dist,
    normalized_tree_dist,
    space_log_likelihood,
)
from ..search import best_proof_clause_weights
from ..terms import constant

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    expected: str
    actual: str
    tolerance: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict}\t{self.name}\texpected {self.expected}\tgot {self.actual}"


class RegressionEvaluator:
    """Runs the sample-program checks and reports one result per check."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.name = "Regression Evaluator"
        self.config = config or {}
        self.program = sample_program()
        self.corpus = sample_corpus()
        self.depth = SAMPLE_DEPTH
        self.space = TreeSpace(self.program, self.corpus, self.depth)
        self.evaluation_criteria = self.get_evaluation_criteria()

    def log(self, message: str, *args):
        logger.debug("[EVAL] " + message, *args)

    def get_evaluation_criteria(self) -> Dict[str, Dict[str, Any]]:
        return {
            "erf_table": {"check": self._erf_table, "tolerance": 1e-12},
            "counterexample": {"check": self._counterexample, "tolerance": 1e-9},
            "loglinear_endpoint": {"check": self._loglinear_endpoint, "tolerance": 1e-9},
            "im_first_step": {"check": self._im_first_step, "tolerance": 1e-8},
            "im_convergence": {"check": self._im_convergence, "tolerance": 1e-6},
            "gain": {"check": self._gain, "tolerance": 1e-8},
            "selection": {"check": self._selection, "tolerance": 0.0},
            "induction": {"check": self._induction, "tolerance": 1e-6},
            "best_proof": {"check": self._best_proof, "tolerance": 1e-12},
        }

    def _binding(self, value: str) -> AnswerBinding:
        return AnswerBinding((1,), constant(value))

    def _model(self, weight: float) -> LogLinearModel:
        return LogLinearModel.initial(self.program).extend(self._binding("a"), weight)

    @staticmethod
    def _close(expected, actual, tolerance: float) -> bool:
        return bool(np.allclose(np.asarray(actual, dtype=float), np.asarray(expected, dtype=float), rtol=0.0, atol=tolerance))

    def _erf_table(self, tolerance: float) -> CheckResult:
        report = erf_table(ChoiceParams.uniform(self.program), self.corpus, self.program, self.depth)
        expected = [3, 2, 1, 2, 1] + [3] * 5 + [1, 2 / 3, 1 / 3, 2 / 3, 1 / 3]
        actual = report.totals + report.denominators + [report.estimate[key] for key in report.clause_keys]
        return self._result("erf_table", expected, actual, tolerance)

    def _counterexample(self, tolerance: float) -> CheckResult:
        estimate = ChoiceParams.from_mapping(
            self.program, erf_table(ChoiceParams.uniform(self.program), self.corpus, self.program, self.depth).estimate
        )
        trees = self.space.trees
        renormalized = normalized_tree_dist(estimate, trees)
        log_linear = TreeDistribution.from_log_weights(trees, np.log([2 / 3, 1 / 3]))
        p_erf = corpus_likelihood(renormalized, self.corpus)
        p_loglinear = corpus_likelihood(log_linear, self.corpus)
        expected = [0.8, 0.2, 0.128, 4 / 27, 1.0]
        actual = list(renormalized.mass) + [p_erf, p_loglinear, float(p_loglinear > p_erf)]
        return self._result("counterexample", expected, actual, tolerance)

    def _loglinear_endpoint(self, tolerance: float) -> CheckResult:
        model = self._model(math.log(2))
        dist = exact_dist(model, self.space.trees)
        uniform = LogLinearModel.initial(self.program)
        expected = [2 / 3, 1 / 3, 4 / 27, 0.125]
        actual = list(dist.mass) + [
            math.exp(space_log_likelihood(model, self.space)),
            math.exp(space_log_likelihood(uniform, self.space)),
        ]
        return self._result("loglinear_endpoint", expected, actual, tolerance)

    def _im_first_step(self, tolerance: float) -> CheckResult:
        gamma = im_gamma(self._model(0.0), self.space)
        return self._result("im_first_step", [0.0, 0.5 * math.log(4 / 3)], list(gamma), tolerance)

    def _im_convergence(self, tolerance: float) -> CheckResult:
        result = im_estimate(self._model(0.0), self.space, tol=1e-14, max_iters=1000)
        return self._result("im_convergence", [math.log(2)], [result.model.weights[1]], tolerance)

    def _gain(self, tolerance: float) -> CheckResult:
        scored = gain(self._binding("a"), LogLinearModel.initial(self.program), self.space)
        expected = [math.log(4 / 3), 2 * math.log(4 / 3) - 0.5]
        return self._result("gain", expected, [scored.alpha, scored.gain], tolerance)

    def _selection(self, tolerance: float) -> CheckResult:
        chosen = select_property(LogLinearModel.initial(self.program), self.space, self.program)
        expected = self._binding("b").serialize()
        return CheckResult(
            name="selection", passed=chosen.key == expected, expected=expected, actual=chosen.key, tolerance=tolerance
        )

    def _induction(self, tolerance: float) -> CheckResult:
        state = induce(self.program, self.corpus, self.depth, rounds=1, tol=1e-14)
        weights = dict(zip((prop.serialize() for prop in state.model.properties), state.model.weights))
        actual = [weights.get(self._binding("b").serialize(), math.nan), math.exp(state.log_likelihood)]
        return self._result("induction", [math.log(0.5), 4 / 27], actual, tolerance)

    def _best_proof(self, tolerance: float) -> CheckResult:
        query = open_query()
        tree, weight = best_proof_clause_weights(self.program, query, {"p/1.1": math.log(2)}, self.depth)
        expected_tree = enumerate_proofs(self.program, query, self.depth)[0].bracketed()
        passed = tree.bracketed() == expected_tree and abs(weight - math.log(2)) <= tolerance
        return CheckResult(
            name="best_proof",
            passed=passed,
            expected=f"{expected_tree} {math.log(2):.12g}",
            actual=f"{tree.bracketed()} {weight:.12g}",
            tolerance=tolerance,
        )

    def _result(self, name: str, expected, actual, tolerance: float) -> CheckResult:
        def render(values) -> str:
            return "(" + ", ".join(f"{float(v):.12g}" for v in values) + ")"

        return CheckResult(
            name=name,
            passed=self._close(expected, actual, tolerance),
            expected=render(expected),
            actual=render(actual),
            tolerance=tolerance,
        )

    def evaluate(self, names: Optional[List[str]] = None) -> List[CheckResult]:
        """Run the named checks (all by default); a check that raises counts as failed."""
        results: List[CheckResult] = []
        for name, criterion in self.evaluation_criteria.items():
            if names and name not in names:
                continue
            check: Callable[[float], CheckResult] = criterion["check"]
            try:
                result = check(criterion["tolerance"])
            except Exception as exc:
                logger.error("check %s raised %s", name, exc)
                result = CheckResult(
                    name=name, passed=False, expected="no error", actual=repr(exc), tolerance=criterion["tolerance"]
                )
            self.log("%s", result.line())
            results.append(result)
        passed = sum(result.passed for result in results)
        logger.info("%d of %d regression checks passed", passed, len(results))
        return results
