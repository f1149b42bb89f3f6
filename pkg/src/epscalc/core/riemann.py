"""
Rectangle-sum brackets for monotone integrands.

For a monotone f on [a, b] with n equal panels, the left and right sums
enclose the integral and differ by exactly |f(b) - f(a)| * (b - a) / n.
Doubling n never widens the bracket.
"""

import logging
from typing import Callable, Tuple

from ..errors import ConvergenceError

logger = logging.getLogger(__name__)


def pairwise_sum(values) -> float:
    """Sum with a fixed pairwise reduction order."""
    values = list(values)
    while len(values) > 1:
        paired = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0] if values else 0.0


def rectangle_sums(f: Callable[[float], float], a: float, b: float, n: int) -> Tuple[float, float]:
    """
    Left and right rectangle sums of f on [a, b] with n panels.

    Returns:
        (lo, hi) ordered so that lo <= hi
    """
    h = (b - a) / n
    values = [f(a + i * h) for i in range(n + 1)]
    interior = pairwise_sum(values[1:-1])
    left = h * (values[0] + interior)
    right = h * (interior + values[-1])
    return (left, right) if left <= right else (right, left)


def panels_for(f_a: float, f_b: float, a: float, b: float, tol: float) -> int:
    """Smallest power-of-two panel count giving bracket width <= tol."""
    spread = abs(f_b - f_a) * abs(b - a)
    n = 1
    while spread / n > tol:
        n *= 2
    return n


def monotone_bracket(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_panels: int,
    strict: bool = True,
) -> Tuple[float, float, int]:
    """
    Bracket the integral of a monotone f over [a, b] (a <= b).

    Args:
        f: Integrand, monotone on [a, b]
        a, b: Endpoints
        tol: Target bracket width
        max_panels: Panel cap
        strict: Raise when the cap prevents reaching ``tol``; otherwise
                return the capped bracket

    Returns:
        (lo, hi, n_panels)

    Raises:
        ConvergenceError: If ``strict`` and the cap is exceeded
    """
    if a == b:
        return 0.0, 0.0, 1
    n = panels_for(f(a), f(b), a, b, tol)
    if n > max_panels:
        if strict:
            raise ConvergenceError(
                f"tolerance {tol:g} unreachable within {max_panels} panels on [{a!r}, {b!r}]"
            )
        logger.warning(
            "[riemann] panel cap %d reached on [%g, %g]; bracket wider than %g",
            max_panels, a, b, tol,
        )
        n = max_panels
    lo, hi = rectangle_sums(f, a, b, n)
    return lo, hi, n
