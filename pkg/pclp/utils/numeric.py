"""
Shared numeric constants, formatting and random-stream helpers.
"""

from typing import List, Optional

import numpy as np

# Normalized distributions must sum to one within this bound.
NORMALIZATION_TOL = 1e-12
# Tolerance for comparing likelihoods, gains and weights.
COMPARISON_TOL = 1e-9


def format_float(value: float) -> str:
    """CLI output format: 12 significant digits."""
    return f"{value:.12g}"


def format_parameter(value: float) -> str:
    """Model-file format: 17 significant digits, enough for an exact round trip."""
    return f"{value:.17g}"


def seed_sequence(master_seed: Optional[int], *key: int) -> np.random.SeedSequence:
    """Deterministic child stream of ``master_seed`` addressed by ``key``."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in key))


def chain_generators(master_seed: Optional[int], count: int, *key: int) -> List[np.random.Generator]:
    """One independent generator per chain, derived from the master seed."""
    children = seed_sequence(master_seed, *key).spawn(count)
    return [np.random.default_rng(child) for child in children]
