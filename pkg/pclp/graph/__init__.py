from .induction_graph import InductionGraph, InductionState, RoundRecord, induce

__all__ = ["InductionGraph", "InductionState", "RoundRecord", "induce"]
