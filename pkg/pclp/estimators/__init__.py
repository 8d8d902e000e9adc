"""
Estimators used by the induction loop.
"""

from .base_estimator import BaseEstimator
from .exact import ExactEstimator
from .monte_carlo import MonteCarloEstimator


def get_estimator(config: dict) -> BaseEstimator:
    """Exact or Monte-Carlo estimator according to ``config['mode']``."""
    if config.get("mode", "exact") == "mc":
        return MonteCarloEstimator(config)
    return ExactEstimator(config)


__all__ = ["BaseEstimator", "ExactEstimator", "MonteCarloEstimator", "get_estimator"]
