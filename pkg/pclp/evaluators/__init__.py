"""
Regression checks for pclp.
"""

from .regression_evaluator import CheckResult, RegressionEvaluator

__all__ = ["CheckResult", "RegressionEvaluator"]
