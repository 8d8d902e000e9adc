"""
One-dimensional root finding for strictly decreasing residuals.

Newton's method from a start point, falling back to Brent's method on a
bracketing interval when Newton fails to converge.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.optimize import brentq

from ..errors import NewtonDiverged

logger = logging.getLogger(__name__)

Residual = Callable[[float], float]


@dataclass(frozen=True)
class RootResult:
    value: float
    iterations: int
    method: str  # newton, brentq or clamped
    residual: float


def newton(
    f: Residual,
    fprime: Residual,
    start: float = 0.0,
    max_iter: int = 50,
    tol: float = 1e-10,
    limit: float = 30.0,
    index: Optional[object] = None,
) -> RootResult:
    """Plain Newton iteration; raises NewtonDiverged when |f| stays above ``tol``."""
    x = start
    fx = f(x)
    for iteration in range(max_iter):
        if abs(fx) < tol:
            return RootResult(x, iteration, "newton", fx)
        slope = fprime(x)
        if not math.isfinite(slope) or slope == 0.0:
            break
        x = x - fx / slope
        if not math.isfinite(x) or abs(x) > limit:
            break
        fx = f(x)
        if not math.isfinite(fx):
            break
    else:
        if abs(fx) < tol:
            return RootResult(x, max_iter, "newton", fx)
    raise NewtonDiverged(index, max_iter, abs(fx) if math.isfinite(fx) else math.inf)


def _finite_end(f: Residual, end: float) -> float:
    """Shrink an interval end towards zero until the residual is finite."""
    while end != 0.0 and not math.isfinite(f(end)):
        end /= 2.0
    return end


def bracketed_root(f: Residual, bracket: float = 30.0, index: Optional[object] = None) -> RootResult:
    """Brent's method on [-bracket, bracket]; clamps to the better end without a sign change."""
    lo = _finite_end(f, -bracket)
    hi = _finite_end(f, bracket)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return RootResult(lo, 0, "brentq", 0.0)
    if f_hi == 0.0:
        return RootResult(hi, 0, "brentq", 0.0)
    if f_lo * f_hi > 0:
        value, residual = (lo, f_lo) if abs(f_lo) < abs(f_hi) else (hi, f_hi)
        logger.warning(
            "no sign change on [%g, %g] for coordinate %s; clamping to %g", lo, hi, index, value
        )
        return RootResult(value, 0, "clamped", residual)
    value, info = brentq(f, lo, hi, xtol=1e-15, maxiter=500, full_output=True)
    return RootResult(float(value), info.iterations, "brentq", f(value))


def solve_decreasing(
    f: Residual,
    fprime: Residual,
    start: float = 0.0,
    max_iter: int = 50,
    tol: float = 1e-10,
    bracket: float = 30.0,
    index: Optional[object] = None,
) -> RootResult:
    """Newton first, Brent's method on the bracket when Newton diverges."""
    try:
        return newton(f, fprime, start, max_iter, tol, bracket, index)
    except NewtonDiverged as exc:
        logger.info("%s; falling back to bracketing", exc)
        return bracketed_root(f, bracket, index)
