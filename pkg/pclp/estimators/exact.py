"""
Estimator computing every expectation by enumeration.
"""

from typing import Any, Dict, Optional, Sequence

from ..induction import Candidate, IMResult, im_estimate, select_property
from ..models import LogLinearModel, Property, TreeSpace
from .base_estimator import BaseEstimator


class ExactEstimator(BaseEstimator):
    def __init__(self, config: Optional[Dict[str, Any]] = None):
        super().__init__("exact", config)

    def _newton(self) -> Dict[str, Any]:
        return {
            "newton_max_iter": self.config.get("newton_max_iter", 50),
            "newton_tol": self.config.get("newton_tol", 1e-10),
            "bracket": self.config.get("bracket", 30.0),
        }

    def select(self, model: LogLinearModel, space: TreeSpace, candidates: Sequence[Property], round_index: int) -> Candidate:
        chosen = select_property(model, space, candidates=candidates, **self._newton())
        self.log("round %d: %d candidates, best '%s' gain %.6g", round_index, len(candidates), chosen.key, chosen.gain)
        return chosen

    def estimate(self, model: LogLinearModel, space: TreeSpace, round_index: int) -> IMResult:
        result = im_estimate(
            model,
            space,
            tol=self.config.get("tol", 1e-9),
            max_iters=self.config.get("iters", 1000),
            **self._newton(),
        )
        self.log("round %d: IM ran %d iterations, L = %.12g", round_index, result.iterations, result.log_likelihood)
        return result
