"""
Deterministic sampling grids shared by the certification routines.

All grids are dense near zero, where the "arbitrarily small" property of an
error function is actually tested.
"""

from typing import List

import numpy as np

# Comparison slack absorbing floating-point roundoff in bound evaluation
SLACK = 1.0 + 2.0**-20

# Unit roundoff for double precision
UNIT_ROUNDOFF = 2.0**-53

DEFAULT_GRID_POINTS = 4097
DEFAULT_DEPTH = 40


def certification_grid(
    radius: float, points: int = DEFAULT_GRID_POINTS, depth: int = DEFAULT_DEPTH
) -> np.ndarray:
    """
    Symmetric geometric grid on [-radius, radius].

    Half of the points (rounded down) are spaced geometrically from ``radius``
    down to ``radius * 2**-depth``, mirrored to the negative side, plus the
    origin. The default gives 2048 + 2048 + 1 = 4097 points.

    Returns:
        Sorted array of grid points including 0.0
    """
    half = max((points - 1) // 2, 1)
    positive = np.geomspace(radius, radius * 2.0**-depth, half)
    return np.sort(np.concatenate([-positive, [0.0], positive]))


def one_sided_grid(radius: float, depth: int = DEFAULT_DEPTH, side: int = 1) -> List[float]:
    """
    Halving grid ``eps_k = radius * 2**-k`` for k = 0..depth.

    Args:
        radius: Largest step
        depth: Number of halvings
        side: +1 for right-hand steps, -1 for left-hand steps
    """
    return [side * radius * 2.0**-k for k in range(depth + 1)]


def symmetric_halving_grid(radius: float, depth: int = DEFAULT_DEPTH) -> List[float]:
    """Both sides of :func:`one_sided_grid`, without the origin."""
    right = one_sided_grid(radius, depth, 1)
    return [-e for e in reversed(right)] + right
