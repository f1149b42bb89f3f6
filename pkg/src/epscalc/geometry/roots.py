"""
Roots without library powers.

Square roots come from Newton's iteration on t^2 = s started above the root
from the binary exponent, so the iteration decreases monotonically and
stops when it can no longer improve. Higher roots and the generic solver
use bisection; ``golden_min`` locates the extremum of a unimodal function.
"""

import logging
import math
from typing import Callable, Tuple

from ..errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


def int_power(x: float, n: int) -> float:
    """x**n for integer n >= 0 by repeated squaring."""
    if n < 0:
        raise DomainError(f"negative integer power {n}")
    result, base = 1.0, x
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def sqrt(s: float) -> float:
    """
    Square root of s >= 0.

    Raises:
        DomainError: If s is negative or NaN
    """
    if not s >= 0.0:
        raise DomainError(f"square root of negative number {s!r}")
    if s == 0.0 or s == math.inf:
        return s
    m, e = math.frexp(s)
    if e % 2:
        m, e = m * 2.0, e - 1
    # m in [0.5, 2), sqrt(m) < 1.5
    t = math.ldexp(1.5, e // 2)
    for _ in range(64):
        nxt = 0.5 * (t + s / t)
        if nxt >= t:
            break
        t = nxt
    return t


def bisect(
    g: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    increasing: bool = True,
    max_iter: int = 2000,
) -> Tuple[float, float]:
    """
    Bisect a monotone g for g(x) = target on [lo, hi].

    Runs until the midpoint coincides with an endpoint, i.e. the bracket is
    one ulp wide.

    Returns:
        Final (lo, hi) bracket

    Raises:
        ConvergenceError: If the iteration cap is exceeded
    """
    for i in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            logger.debug("bisect converged after %d iterations", i)
            return lo, hi
        below = g(mid) < target
        if below == increasing:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not converge within {max_iter} iterations")


def nth_root(x: float, n: int) -> float:
    """
    Positive n-th root of x > 0 by bisection on t^n = x.

    Raises:
        DomainError: If x <= 0 or n < 1
    """
    if n < 1:
        raise DomainError(f"root index must be positive, got {n}")
    if not x > 0.0:
        raise DomainError(f"n-th root needs a positive argument, got {x!r}")
    if n == 1:
        return x
    if n == 2:
        return sqrt(x)
    _, e = math.frexp(x)
    lo = math.ldexp(1.0, e // n - 2)
    hi = math.ldexp(1.0, -(-e // n) + 1)
    lo, hi = bisect(lambda t: int_power(t, n), x, lo, hi)
    return lo if abs(int_power(lo, n) - x) <= abs(int_power(hi, n) - x) else hi


_INV_PHI = (sqrt(5.0) - 1.0) / 2.0


def golden_min(
    h: Callable[[float], float], lo: float, hi: float, max_iter: int = 200
) -> Tuple[float, int]:
    """
    Golden-section search for a minimum of a unimodal h on [lo, hi].

    Returns:
        (argmin estimate, iterations used)
    """
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = h(x1), h(x2)
    for i in range(max_iter):
        if hi - lo <= 4.0 * 2.0**-53 * max(abs(lo), abs(hi), 1e-300):
            return 0.5 * (lo + hi), i
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = h(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = h(x2)
    return 0.5 * (lo + hi), max_iter
