"""
The induction loop as a state graph.

    property_selection ──estimate──▶ parameter_estimation ──continue──┐
          ▲   │                              │                        │
          │   └──stop──▶ END ◀────stop───────┘                        │
          └───────────────────────────────────────────────────────────┘

Selection scores the candidate pool and stops when the best gain falls below
the tolerance; estimation adds the chosen property and refits every parameter.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

from langgraph.graph import END, StateGraph
from pydantic import BaseModel, ConfigDict, Field

from ..clp import Program, Query
from ..estimators import BaseEstimator, get_estimator
from ..induction import Candidate, generate_candidates
from ..models import LogLinearModel, TreeSpace, space_log_likelihood

logger = logging.getLogger(__name__)


class RoundRecord(BaseModel):
    """One line of the round log."""

    round: int
    property: str
    gain: float
    alpha: float
    log_likelihood: float
    degenerate: bool = False
    iterations: int = 0
    converged: bool = True
    exact_gain: Optional[float] = None

    @property
    def likelihood(self) -> float:
        return math.exp(self.log_likelihood)


class InductionState(BaseModel):
    """State carried between the graph's nodes."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: LogLinearModel
    round: int = 0
    log_likelihood: float = 0.0
    candidate: Optional[Candidate] = None
    records: List[RoundRecord] = Field(default_factory=list)
    stop_reason: Optional[str] = None


class InductionGraph:
    """Alternates property selection and parameter estimation for a fixed corpus."""

    def __init__(
        self,
        program: Program,
        corpus: Sequence[Query],
        depth: int,
        config: Optional[Dict[str, Any]] = None,
        estimator: Optional[BaseEstimator] = None,
        debug: bool = False,
    ):
        self.config = config or {}
        self.debug = debug
        self.rounds = int(self.config.get("rounds", 1))
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        self.tol = float(self.config.get("tol", 1e-9))
        self.program = program
        self.space = TreeSpace(program, corpus, depth, self.config.get("exact_tree_limit"))
        self.estimator = estimator or get_estimator(self.config)
        self.graph = self._build_graph()

    def log(self, message: str, *args):
        """Log message if debug is enabled."""
        level = logging.INFO if self.debug else logging.DEBUG
        logger.log(level, "[GRAPH] " + message, *args)

    def _build_graph(self):
        graph = StateGraph(InductionState)
        graph.add_node("property_selection", self._property_selection_node)
        graph.add_node("parameter_estimation", self._parameter_estimation_node)

        graph.add_conditional_edges(
            "property_selection",
            self._after_selection,
            {"estimate": "parameter_estimation", "stop": END},
        )
        graph.add_conditional_edges(
            "parameter_estimation",
            self._after_estimation,
            {"continue": "property_selection", "stop": END},
        )

        graph.set_entry_point("property_selection")
        return graph.compile()

    def _property_selection_node(self, state: InductionState) -> Dict[str, Any]:
        round_index = state.round + 1
        candidates = generate_candidates(
            state.model, self.space, self.program, cap=self.config.get("candidate_cap", 10_000)
        )
        if not candidates:
            self.log("round %d: no candidates left", round_index)
            return {"candidate": None, "stop_reason": "no candidates"}
        chosen = self.estimator.select(state.model, self.space, candidates, round_index)
        if chosen.degenerate or chosen.gain < self.tol:
            self.log("round %d: best gain %.3g below %g, stopping", round_index, chosen.gain, self.tol)
            logger.info("stopping before round %d: best gain %.3g is below tolerance", round_index, chosen.gain)
            return {"candidate": chosen, "stop_reason": "gain below tolerance"}
        self.log("round %d: selected '%s' (gain %.6g, alpha %.6g)", round_index, chosen.key, chosen.gain, chosen.alpha)
        return {"candidate": chosen, "stop_reason": None}

    def _parameter_estimation_node(self, state: InductionState) -> Dict[str, Any]:
        round_index = state.round + 1
        chosen = state.candidate
        if self.config.get("warm_start", True):
            model = state.model.extend(chosen.property, chosen.alpha)
        else:
            model = state.model.extend(chosen.property, 0.0)
            model = model.with_weights([0.0] * len(model))
        result = self.estimator.estimate(model, self.space, round_index)
        record = RoundRecord(
            round=round_index,
            property=chosen.key,
            gain=chosen.gain,
            alpha=chosen.alpha,
            log_likelihood=result.log_likelihood,
            degenerate=chosen.degenerate,
            iterations=result.iterations,
            converged=result.converged,
            exact_gain=chosen.exact_gain,
        )
        self.log("round %d: L = %.12g", round_index, record.log_likelihood)
        return {
            "model": result.model,
            "round": round_index,
            "log_likelihood": result.log_likelihood,
            "records": state.records + [record],
        }

    def _after_selection(self, state: InductionState) -> str:
        return "stop" if state.stop_reason else "estimate"

    def _after_estimation(self, state: InductionState) -> str:
        return "stop" if state.round >= self.rounds else "continue"

    def run(self, initial_model: Optional[LogLinearModel] = None) -> InductionState:
        model = initial_model or LogLinearModel.initial(self.program)
        state = InductionState(model=model, log_likelihood=space_log_likelihood(model, self.space))
        self.log("starting induction: %d trees, %d distinct queries", self.space.size, len(self.space.queries))
        result = self.graph.invoke(state, config={"recursion_limit": 2 * self.rounds + 10})
        if isinstance(result, dict):
            result = InductionState(**result)
        if result.stop_reason is None:
            result = result.model_copy(update={"stop_reason": "rounds exhausted"})
        return result


def induce(
    program: Program,
    corpus: Sequence[Query],
    depth: int,
    rounds: int = 1,
    tol: float = 1e-9,
    config: Optional[Dict[str, Any]] = None,
    initial_model: Optional[LogLinearModel] = None,
) -> InductionState:
    """Select properties and fit parameters for ``rounds`` rounds or until no candidate gains ``tol``."""
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    settings = dict(config or {})
    settings.update(rounds=rounds, tol=tol)
    return InductionGraph(program, corpus, depth, settings).run(initial_model)
