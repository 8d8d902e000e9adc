"""
Normalized distributions over finite sets of proof trees.
"""

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..clp import ProofTree
from ..errors import AllZero
from ..utils.numeric import NORMALIZATION_TOL


@dataclass(frozen=True)
class TreeDistribution:
    """Strictly positive probabilities over ``support``, stored in log space."""

    support: Tuple[ProofTree, ...]
    log_mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.support) != len(self.log_mass):
            raise ValueError("support and masses differ in length")
        if not np.all(np.isfinite(self.log_mass)):
            raise ValueError("every tree in the support needs positive finite mass")
        total = float(np.exp(self.log_mass).sum()) if len(self.support) else 1.0
        if abs(total - 1.0) > NORMALIZATION_TOL * max(1, len(self.support)):
            raise ValueError(f"distribution sums to {total!r}")

    @classmethod
    def from_log_weights(cls, support: Sequence[ProofTree], log_weights: np.ndarray) -> "TreeDistribution":
        """
        Normalize unnormalized log weights with one log-sum-exp pass. Trees of
        weight zero are left out of the support.
        """
        log_weights = np.asarray(log_weights, dtype=float)
        if not len(support):
            raise ValueError("cannot normalize over an empty support")
        log_z = logsumexp(log_weights)
        if not np.isfinite(log_z):
            raise AllZero("every tree in the support has zero weight")
        kept = np.isfinite(log_weights)
        return cls(tuple(tree for tree, keep in zip(support, kept) if keep), log_weights[kept] - log_z)

    @property
    def mass(self) -> np.ndarray:
        return np.exp(self.log_mass)

    def prob(self, tree: ProofTree) -> float:
        return float(self.as_dict().get(tree, 0.0))

    def as_dict(self) -> Dict[ProofTree, float]:
        return dict(zip(self.support, self.mass.tolist()))

    def expectation(self, values) -> float:
        """``p[f]`` for a callable ``f`` or an array of per-tree values."""
        if callable(values):
            values = [values(tree) for tree in self.support]
        return float(np.dot(self.mass, np.asarray(values, dtype=float)))

    def __len__(self) -> int:
        return len(self.support)


def reweight_distribution(base: TreeDistribution, log_factors: np.ndarray) -> TreeDistribution:
    """Normalize ``e^{log_factors} · base``, the right-hand side of the extension identity."""
    return TreeDistribution.from_log_weights(base.support, base.log_mass + np.asarray(log_factors, dtype=float))
