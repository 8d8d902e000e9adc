"""
Base class for the estimators the induction loop delegates to.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Sequence

from ..induction import Candidate, IMResult
from ..models import LogLinearModel, Property, TreeSpace

logger = logging.getLogger(__name__)


class BaseEstimator(ABC):
    """Selects properties and fits parameters for one tree space."""

    def __init__(self, name: str, config: Optional[Dict[str, Any]] = None):
        self.name = name
        self.config = config or {}

    def log(self, message: str, *args):
        logger.debug("[%s] " + message, self.name.upper(), *args)

    @abstractmethod
    def select(self, model: LogLinearModel, space: TreeSpace, candidates: Sequence[Property], round_index: int) -> Candidate:
        """Score ``candidates`` against ``model`` and return the best one."""
        pass

    @abstractmethod
    def estimate(self, model: LogLinearModel, space: TreeSpace, round_index: int) -> IMResult:
        """Fit every parameter of ``model``."""
        pass
