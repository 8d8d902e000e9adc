"""
Sample-based estimator variables and the Monte-Carlo Newton updates.

    s_r(α, c) = Σ_v S[c,v] e^{αv} v^r
    t_y(c)    = (1/M) Σ_v T[y,c,v] v
    u_r(α, i) = Σ_m U[i,m] e^{αm} m^r

Sums of exponentials are evaluated in log space.
"""

import logging
import math
from collections import Counter
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from ..errors import NonFiniteEstimate
from ..induction import Candidate, RootResult
from ..models import Property
from .tables import CountTables

logger = logging.getLogger(__name__)


def _moment(table: Counter, alpha: float, r: int) -> float:
    """Σ_v table[v] e^{αv} v^r."""
    items = [(v, w) for v, w in table.items() if w > 0 and (r == 0 or v != 0)]
    if not items:
        return 0.0
    values = np.array([v for v, _ in items], dtype=float)
    weights = np.array([w * float(v) ** r for v, w in items])
    with np.errstate(over="ignore"):
        result = float(np.exp(logsumexp(alpha * values, b=weights)))
    if not math.isfinite(result):
        raise NonFiniteEstimate(f"sample moment overflowed at α={alpha!r}")
    return result


def s_r(tables: CountTables, prop: Property, alpha: float, r: int) -> float:
    return _moment(tables.S[prop], alpha, r)


def t_y(tables: CountTables, y: int, prop: Property) -> float:
    size = tables.chain_sizes[y]
    if size == 0:
        return 0.0
    return sum(value * count for value, count in tables.T[y][prop].items()) / size


def u_r(tables: CountTables, index: int, alpha: float, r: int) -> float:
    return _moment(tables.U[index], alpha, r)


def observed_total(tables: CountTables, prop: Property) -> float:
    """Σ_y t_y(c) over the corpus, each distinct query weighted by its multiplicity."""
    return float(sum(weight * t_y(tables, y, prop) for y, weight in enumerate(tables.multiplicity)))


def _iterate(step, start: float, tol: float, max_iter: int, label: object) -> RootResult:
    alpha = start
    delta = math.inf
    for iteration in range(1, max_iter + 1):
        delta = step(alpha)
        if not math.isfinite(delta):
            raise NonFiniteEstimate(f"Monte-Carlo Newton step for {label} is not finite")
        alpha += delta
        if abs(delta) < tol:
            return RootResult(alpha, iteration, "mc-newton", delta)
    logger.warning("Monte-Carlo Newton for %s stopped after %d steps (last step %.3e)", label, max_iter, delta)
    return RootResult(alpha, max_iter, "mc-newton", delta)


def mc_newton_select(
    prop: Property,
    tables: CountTables,
    N: Optional[float] = None,
    L: Optional[float] = None,
    alpha0: float = 0.0,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> RootResult:
    """α_{t+1} = α_t + (Σ_y t_y(c) − (N/L) s_1) / ((N/L) s_2)."""
    ratio = (N if N is not None else tables.corpus_size) / (L if L is not None else tables.combined_size)
    observed = observed_total(tables, prop)

    def step(alpha: float) -> float:
        curvature = ratio * s_r(tables, prop, alpha, 2)
        if curvature <= 0:
            raise NonFiniteEstimate(f"property '{prop}' never fires in the combined sample")
        return (observed - ratio * s_r(tables, prop, alpha, 1)) / curvature

    return _iterate(step, alpha0, tol, max_iter, prop)


def mc_gain(prop: Property, tables: CountTables, alpha: float) -> float:
    """G_c(α+λ) ≈ N + α Σ_y t_y(c) − (N/L) s_0(α, c)."""
    N, L = tables.corpus_size, tables.combined_size
    return N + alpha * observed_total(tables, prop) - (N / L) * s_r(tables, prop, alpha, 0)


def mc_candidate(prop: Property, tables: CountTables, tol: float = 1e-8, max_iter: int = 50) -> Candidate:
    """Gain and maximizer estimated from the tables; constant-valued properties are degenerate."""
    if len([v for v, w in tables.S[prop].items() if w > 0]) <= 1:
        return Candidate(property=prop, gain=0.0, alpha=0.0, degenerate=True, method="degenerate")
    try:
        root = mc_newton_select(prop, tables, tol=tol, max_iter=max_iter)
    except NonFiniteEstimate as exc:
        logger.warning("skipping candidate '%s': %s", prop, exc)
        return Candidate(property=prop, gain=0.0, alpha=0.0, degenerate=True, method="non-finite")
    return Candidate(
        property=prop,
        gain=mc_gain(prop, tables, root.value),
        alpha=root.value,
        iterations=root.iterations,
        method=root.method,
    )


def mc_newton_estimate(
    index: int,
    tables: CountTables,
    N: Optional[float] = None,
    L: Optional[float] = None,
    gamma0: float = 0.0,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> Optional[RootResult]:
    """
    α_{t+1} = α_t + (Σ_y t_y(ν_i) − (N/L) u_0) / ((N/L) u_1) for model property
    ``index``. Returns ``None`` when the property never occurs in the sample.
    """
    prop = tables.model_properties[index]
    if not any(weight > 0 for weight in tables.U[index].values()):
        logger.warning("property '%s' does not occur in the sample; dropping it", prop)
        return None
    ratio = (N if N is not None else tables.corpus_size) / (L if L is not None else tables.combined_size)
    observed = observed_total(tables, prop)

    def step(gamma: float) -> float:
        return (observed - ratio * u_r(tables, index, gamma, 0)) / (ratio * u_r(tables, index, gamma, 1))

    return _iterate(step, gamma0, tol, max_iter, prop)
