"""
Bracketed areas on the three defining curves.

Curves:
    Circle: x^2 + y^2 = 1, sector above the x-axis from (1, 0) to (x, y)
    Hyperbola: x^2 - y^2 = 1 (right branch), curvilinear triangle between
               the x-axis, the ray to (x, y) and the curve
    Skew: xy = 1, region under the curve from 1 to x

Two ways of computing areas live here:

- ``sector_area`` parameterizes by the x-coordinate and brackets with
  left/right rectangle sums of a monotone integrand. It needs ~1/tol panels.
- ``region_brackets``/``solve_region``/``solve_area`` parameterize by the
  height on the bisecting ray (or by x - 1 for the skew curve) and bracket
  the region between its inscribed and circumscribed polygons, splitting
  every piece in two per step. The bracket reaches full double precision
  after a few dozen square roots, so the function kernels solve their base
  range directly with it.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Iterator, Tuple

from ..core.riemann import monotone_bracket
from ..errors import ConvergenceError, DomainError
from .roots import sqrt

logger = logging.getLogger(__name__)

DEFAULT_MAX_PANELS = 2**26
DEFAULT_BISECTION_CAP = 200
DEFAULT_MAX_DOUBLINGS = 64


class CurveId(Enum):
    """The three defining curves."""

    CIRCLE = "circle"
    HYPERBOLA = "hyperbola"
    SKEW = "skew"


@dataclass(frozen=True)
class AreaBracket:
    """Rigorous [lo, hi] enclosure of an area at a refinement level."""

    lo: float
    hi: float
    n_panels: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError(f"inverted area bracket [{self.lo!r}, {self.hi!r}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def to_dict(self) -> Dict[str, float]:
        return {"lo": self.lo, "hi": self.hi, "n_panels": self.n_panels}


def curve_y(curve: CurveId, x: float) -> float:
    """
    Upper y-coordinate on the curve at x.

    Raises:
        DomainError: If x is outside the curve's parameter range
    """
    if curve is CurveId.CIRCLE:
        if not -1.0 <= x <= 1.0:
            raise DomainError(f"circle needs -1 <= x <= 1, got {x!r}")
        return sqrt((1.0 - x) * (1.0 + x))
    if curve is CurveId.HYPERBOLA:
        if not x >= 1.0:
            raise DomainError(f"hyperbola needs x >= 1, got {x!r}")
        return sqrt((x - 1.0) * (x + 1.0))
    if not x > 0.0:
        raise DomainError(f"skew hyperbola needs x > 0, got {x!r}")
    return 1.0 / x


def sector_area(
    curve: CurveId, x: float, tol: float, max_panels: int = DEFAULT_MAX_PANELS
) -> AreaBracket:
    """
    Bracket the area of the region selected by the curve point at x.

    Circle:    x*y/2 + integral_x^1 sqrt(1 - t^2) dt        (x in [-1, 1])
    Hyperbola: x*y/2 - integral_1^x sqrt(t^2 - 1) dt        (x >= 1)
    Skew:      integral_1^x dt/t, negative for 0 < x < 1

    Each integrand is monotone on the pieces used (the circle splits at 0),
    so left and right rectangle sums enclose the integral.

    Args:
        curve: Which curve
        x: Abscissa of the selecting point
        tol: Required bracket width
        max_panels: Panel cap per monotone piece

    Raises:
        DomainError: If x is out of range or tol is not positive
        ConvergenceError: If tol is unreachable within the panel cap
    """
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    y = curve_y(curve, x)

    if curve is CurveId.CIRCLE:
        g: Callable[[float], float] = lambda t: sqrt((1.0 - t) * (1.0 + t))  # noqa: E731
        tri = 0.5 * x * y
        if x < 0.0:
            lo1, hi1, n1 = monotone_bracket(g, x, 0.0, tol / 2.0, max_panels)
            lo2, hi2, n2 = monotone_bracket(g, 0.0, 1.0, tol / 2.0, max_panels)
            return AreaBracket(tri + lo1 + lo2, tri + hi1 + hi2, max(n1, n2))
        lo, hi, n = monotone_bracket(g, x, 1.0, tol, max_panels)
        return AreaBracket(tri + lo, tri + hi, n)

    if curve is CurveId.HYPERBOLA:
        g = lambda t: sqrt((t - 1.0) * (t + 1.0))  # noqa: E731
        lo, hi, n = monotone_bracket(g, 1.0, x, tol, max_panels)
        tri = 0.5 * x * y
        return AreaBracket(tri - hi, tri - lo, n)

    recip = lambda t: 1.0 / t  # noqa: E731
    if x >= 1.0:
        lo, hi, n = monotone_bracket(recip, 1.0, x, tol, max_panels)
        return AreaBracket(lo, hi, n)
    lo, hi, n = monotone_bracket(recip, x, 1.0, tol, max_panels)
    return AreaBracket(-hi, -lo, n)


# -- direct solve ------------------------------------------------------------------


def _pieces_bracket(curve: CurveId, h: float, c: float, n: int) -> Tuple[float, float]:
    """Area of n congruent pieces between their chord and tangent polygons."""
    if curve is CurveId.SKEW:
        # one piece spans x in [1, 1 + h]; midpoint and trapezoid rules
        mid = 2.0 * h / (2.0 + h)
        trap = h * (2.0 + h) / (2.0 * (1.0 + h))
        return n * min(mid, trap), n * max(mid, trap)
    chord = n * h * c
    tangent = n * h / c if c > 0.0 else math.inf
    if curve is CurveId.CIRCLE:
        return chord, tangent
    return tangent, chord


def region_brackets(
    curve: CurveId, t: float, max_doublings: int = DEFAULT_MAX_DOUBLINGS
) -> Iterator[AreaBracket]:
    """
    Successively tighter brackets of the region selected by ``t``.

    The parameter is the height of the curve point on the bisecting ray for
    the circle and the hyperbola (so the region has area u when t = sin u or
    t = sinh u) and x - 1 for the skew curve. Every step splits each piece of
    the region into two congruent halves:

        circle, hyperbola: h' = h / sqrt(2 (1 + c)),  c' = sqrt((1 + c) / 2)
        skew:              h' = h / (1 + sqrt(1 + h))

    The sequence ends when the bracket stops narrowing.
    """
    if curve is CurveId.CIRCLE:
        h, c = t, sqrt((1.0 - t) * (1.0 + t))
    elif curve is CurveId.HYPERBOLA:
        h, c = t, sqrt(1.0 + t * t)
    else:
        h, c = t, 0.0
    n = 1
    lo, hi = _pieces_bracket(curve, h, c, n)
    yield AreaBracket(lo, hi, n)
    for _ in range(max_doublings):
        if curve is CurveId.SKEW:
            h = h / (1.0 + sqrt(1.0 + h))
        else:
            h, c = h / sqrt(2.0 * (1.0 + c)), sqrt(0.5 * (1.0 + c))
        n *= 2
        lo2, hi2 = _pieces_bracket(curve, h, c, n)
        lo2, hi2 = max(lo, lo2), min(hi, hi2)
        if lo2 > hi2 or hi2 - lo2 >= hi - lo:
            return
        lo, hi = lo2, hi2
        yield AreaBracket(lo, hi, n)


def region_area(curve: CurveId, t: float) -> AreaBracket:
    """Tightest polygon bracket of the region selected by ``t``."""
    return list(region_brackets(curve, t))[-1]


def region_point(curve: CurveId, t: float) -> Tuple[float, float]:
    """Curve point (x, y) selected by the region parameter ``t``."""
    if curve is CurveId.CIRCLE:
        return 1.0 - 2.0 * t * t, 2.0 * t * sqrt((1.0 - t) * (1.0 + t))
    if curve is CurveId.HYPERBOLA:
        return 1.0 + 2.0 * t * t, 2.0 * t * sqrt(1.0 + t * t)
    return 1.0 + t, 1.0 / (1.0 + t)


def _region_side(curve: CurveId, t: float, target: float) -> int:
    """Sign of area(t) - target, refining only until the bracket decides."""
    for bracket in region_brackets(curve, t):
        if bracket.hi < target:
            return -1
        if bracket.lo > target:
            return 1
    return 0


def _initial_parameter_bracket(curve: CurveId, target: float) -> Tuple[float, float]:
    if curve is CurveId.CIRCLE:
        return target * (1.0 - target * target / 6.0), min(target, 1.0)
    if curve is CurveId.HYPERBOLA:
        return target, target * (1.0 + target * target)
    return target, target + 2.0 * target * target


def solve_region(
    curve: CurveId,
    target: float,
    rel_tol: float = 0.0,
    max_iter: int = DEFAULT_BISECTION_CAP,
) -> float:
    """
    Region parameter whose region has area ``target``.

    Bisection on the parameter; each candidate region is bracketed with
    :func:`region_brackets` only until the bracket decides. Runs until the
    parameter bracket is within ``rel_tol`` relative, one ulp wide, or the
    tightest area bracket still contains the target.

    Raises:
        DomainError: For a negative target or a circle target above the
            half disk
        ConvergenceError: If the iteration cap is reached
    """
    if not target >= 0.0:
        raise DomainError(f"target area must be nonnegative, got {target!r}")
    if curve is CurveId.CIRCLE and target > 2.0 * quarter_disk_area().hi:
        raise DomainError(f"circle sector area {target!r} exceeds the half disk")
    if target == 0.0:
        return 0.0
    ceiling = 1.0 if curve is CurveId.CIRCLE else math.inf
    lo, hi = _initial_parameter_bracket(curve, target)
    while lo > 0.0 and _region_side(curve, lo, target) > 0:
        lo *= 0.5
    while hi < ceiling and _region_side(curve, hi, target) < 0:
        lo, hi = hi, min(2.0 * hi, ceiling)

    for i in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= rel_tol * hi:
            logger.debug("solve_region(%s) converged in %d steps", curve.value, i)
            return mid
        side = _region_side(curve, mid, target)
        if side == 0:
            return mid
        if side < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"solve_region({curve.value}) did not converge in {max_iter} steps")


def solve_area(
    curve: CurveId, target: float, rel_tol: float = 0.0
) -> Tuple[float, float]:
    """
    Find the curve point whose region has the given area.

    For the circle the target is a sector area up to pi/2 (the upper half
    disk). See :func:`solve_region`.

    Returns:
        (x, y) on the curve
    """
    return region_point(curve, solve_region(curve, target, rel_tol))


# -- the quarter disk ---------------------------------------------------------------


@lru_cache(maxsize=None)
def disk_area() -> AreaBracket:
    """
    Unit disk area bracketed by inscribed and circumscribed polygons.

    With h = half the side of the inscribed N-gon and c = sqrt(1 - h^2),
    the polygons have areas N*h*c and N*h/c; doubling N uses
    h' = h / sqrt(2 (1 + c)). Doubling stops once the bracket no longer
    narrows.
    """
    n_sides, h = 4, sqrt(0.5)
    c = sqrt((1.0 - h) * (1.0 + h))
    lo, hi = n_sides * h * c, n_sides * h / c
    while True:
        h2 = h / sqrt(2.0 * (1.0 + c))
        c2 = sqrt((1.0 - h2) * (1.0 + h2))
        lo2, hi2 = 2 * n_sides * h2 * c2, 2 * n_sides * h2 / c2
        if lo2 >= hi2 or hi2 - lo2 >= hi - lo or n_sides > 2**40:
            break
        n_sides, h, c, lo, hi = 2 * n_sides, h2, c2, max(lo, lo2), min(hi, hi2)
    logger.debug("disk area bracket [%r, %r] from %d-gons", lo, hi, n_sides)
    return AreaBracket(lo, hi, n_sides)


def quarter_disk_area() -> AreaBracket:
    disk = disk_area()
    return AreaBracket(disk.lo / 4.0, disk.hi / 4.0, disk.n_panels)


def pi() -> float:
    """pi as the midpoint of the disk-area bracket."""
    return disk_area().mid
