"""
Transcendental functions from areas.

cos/sin come from circle sectors of area A/2, cosh/sinh from hyperbolic
curvilinear triangles of area A/2 and exp from the area A under xy = 1.

Base ranges are solved directly by area bisection (see
``areas.solve_region``); the solve returns the height t on the bisecting
ray, from which the offsets follow without cancellation:
    circle      (0 <= A <= pi/2):  sin A = 2 t sqrt(1 - t^2),  1 - cos A = 2 t^2
    hyperbola   (0 <= A <= 2):     sinh A = 2 t sqrt(1 + t^2), cosh A - 1 = 2 t^2
    skew        (0 <= A <= 2):     exp A - 1 = t

Circle arguments are reduced into [0, pi) with cos(A + n pi) = (-1)^n cos(A),
and (pi/2, pi) is the half disk minus the sector of pi - A. Larger hyperbolic
and exp arguments are halved k times into the base range and doubled back
with the summation rules, written on the offsets from the apex:
    circle      (s, v = 1 - cos):  s' = 2 s (1 - v),  v' = 2 s^2
    hyperbola   (s, w = cosh - 1): s' = 2 s (1 + w),  w' = 2 s^2
    skew        (d = exp - 1):     d' = d (2 + d)
A smaller ``window`` forces the same halving inside the base range.
Negative arguments use the reflection rules (cos even, sin odd, cosh even,
sinh odd, exp(-A) = 1/exp(A)).
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from ..errors import DomainError
from .areas import CurveId, pi, region_area, solve_region
from .roots import bisect, sqrt

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DIRECT_RANGE = 2.0
# Relative accuracy of the direct solve per unit of requested tolerance
_SOLVE_SCALE = 2.0**-26


def _check_args(a: float, tol: float) -> None:
    if not math.isfinite(a):
        raise DomainError(f"argument must be finite, got {a!r}")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")


def _halve(a: float, window: float) -> Tuple[float, int]:
    k = 0
    while a > window:
        a *= 0.5
        k += 1
    return a, k


# -- circle --------------------------------------------------------------------


@lru_cache(maxsize=8192)
def _circle_offsets(a: float, tol: float) -> Tuple[float, float]:
    """(sin a, 1 - cos a) for 0 <= a < pi, solved directly."""
    half_turn = pi()
    if a > 0.5 * half_turn:
        s, v = _circle_offsets(half_turn - a, tol)
        return s, 2.0 - v
    t = solve_region(CurveId.CIRCLE, 0.5 * a, tol * _SOLVE_SCALE)
    return 2.0 * t * sqrt((1.0 - t) * (1.0 + t)), 2.0 * t * t


@lru_cache(maxsize=8192)
def _circle_kernel(a: float, tol: float, window: float) -> Tuple[float, float]:
    """(cos a, sin a) for 0 <= a < pi."""
    t, k = _halve(a, window)
    s, v = _circle_offsets(t, tol)
    for _ in range(k):
        s, v = 2.0 * s * (1.0 - v), 2.0 * s * s
    return 1.0 - v, s


def geo_cos_sin(
    a: float, tol: float = DEFAULT_TOL, window: float = math.inf
) -> Tuple[float, float]:
    """
    (cos A, sin A) from the circle sector of area A/2.

    Args:
        a: Any finite real argument
        tol: Requested accuracy of the function values
        window: Reduced arguments above this are halved into it and doubled
            back; the default solves all of [0, pi) directly

    Raises:
        DomainError: For non-finite arguments
    """
    _check_args(a, tol)
    if a < 0.0:
        c, s = geo_cos_sin(-a, tol, window)
        return c, -s
    p = pi()
    n = int(a // p)
    reduced = a - n * p
    if reduced >= p:
        n, reduced = n + 1, reduced - p
    c, s = _circle_kernel(max(reduced, 0.0), tol, window)
    if n % 2:
        return -c, -s
    return c, s


# -- hyperbola -----------------------------------------------------------------


@lru_cache(maxsize=8192)
def _hyperbola_kernel(a: float, tol: float, window: float) -> Tuple[float, float]:
    """(cosh a - 1, sinh a) for a >= 0."""
    t, k = _halve(a, window)
    q = solve_region(CurveId.HYPERBOLA, 0.5 * t, tol * _SOLVE_SCALE)
    s, w = 2.0 * q * sqrt(1.0 + q * q), 2.0 * q * q
    for _ in range(k):
        s, w = 2.0 * s * (1.0 + w), 2.0 * s * s
        if math.isinf(s) or math.isinf(w):
            raise DomainError(f"cosh/sinh overflow at argument {a!r}")
    return w, s


def geo_cosh_sinh(
    a: float, tol: float = DEFAULT_TOL, window: float = DIRECT_RANGE
) -> Tuple[float, float]:
    """
    (cosh A, sinh A) from the hyperbolic triangle of area A/2.

    |A| <= window is solved directly; larger arguments are halved into the
    window and doubled back.

    Raises:
        DomainError: For non-finite arguments or overflow
    """
    _check_args(a, tol)
    w, s = _hyperbola_kernel(abs(a), tol, window)
    return 1.0 + w, (s if a >= 0.0 else -s)


# -- exp and ln ------------------------------------------------------------------


@lru_cache(maxsize=8192)
def _skew_kernel(a: float, tol: float, window: float) -> float:
    """exp(a) - 1 for a >= 0."""
    t, k = _halve(a, window)
    d = solve_region(CurveId.SKEW, t, tol * _SOLVE_SCALE)
    for _ in range(k):
        d = d * (2.0 + d)
        if math.isinf(d):
            raise DomainError(f"exp overflow at argument {a!r}")
    return d


def geo_expm1(a: float, tol: float = DEFAULT_TOL, window: float = DIRECT_RANGE) -> float:
    """exp(A) - 1 without cancellation near A = 0."""
    _check_args(a, tol)
    if a >= 0.0:
        return _skew_kernel(a, tol, window)
    d = _skew_kernel(-a, tol, window)
    return -d / (1.0 + d)


def geo_exp(a: float, tol: float = DEFAULT_TOL, window: float = DIRECT_RANGE) -> float:
    """
    exp(A) as the x-coordinate bounding area A under xy = 1.

    0 <= A <= window is solved directly and larger A by squaring.
    Negative arguments use exp(-A) = 1/exp(A), so geo_exp(-A) * geo_exp(A)
    is 1 up to one rounding.

    Raises:
        DomainError: For non-finite arguments or overflow
    """
    _check_args(a, tol)
    if a < 0.0:
        return 1.0 / (1.0 + _skew_kernel(-a, tol, window))
    return 1.0 + _skew_kernel(a, tol, window)


@lru_cache(maxsize=None)
def _ln2() -> float:
    return region_area(CurveId.SKEW, 1.0).mid


def _ln_seed(y: float) -> float:
    m, e = math.frexp(y)
    return e * _ln2() + region_area(CurveId.SKEW, m - 1.0).mid


@lru_cache(maxsize=8192)
def geo_ln(y: float, tol: float = DEFAULT_TOL, window: float = DIRECT_RANGE) -> float:
    """
    ln y as the inverse of geo_exp.

    The signed area under xy = 1 from 1 to y gives a seed; bisection on
    geo_exp then settles the last bits.

    Raises:
        DomainError: If y <= 0 or non-finite
    """
    _check_args(y, tol)
    if not y > 0.0:
        raise DomainError(f"ln needs a positive argument, got {y!r}")
    if y == 1.0:
        return 0.0
    seed = _ln_seed(y)
    step = 1e-14 * max(abs(seed), 1e-300)
    lo, hi = seed - step, seed + step
    exp = lambda t: geo_exp(t, tol, window)  # noqa: E731
    while exp(lo) > y:
        lo -= step
        step *= 2.0
    while exp(hi) < y:
        hi += step
        step *= 2.0
    lo, hi = bisect(exp, y, lo, hi)
    return lo if abs(exp(lo) - y) <= abs(exp(hi) - y) else hi


# -- summation matrices ------------------------------------------------------------


@dataclass(frozen=True)
class SumMatrix:
    """
    Determinant-one map adding B to the argument.

    Circle: rotation; hyperbola: boost; skew: diag(exp B, exp -B).
    """

    a11: float
    a12: float
    a21: float
    a22: float
    curve: CurveId

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def apply(self, x: float, y: float) -> Tuple[float, float]:
        return self.a11 * x + self.a12 * y, self.a21 * x + self.a22 * y

    def to_dict(self) -> Dict[str, object]:
        return {
            "curve": self.curve.value,
            "matrix": [[self.a11, self.a12], [self.a21, self.a22]],
            "det": self.det,
        }


def sum_matrix(curve: CurveId, b: float, tol: float = DEFAULT_TOL) -> SumMatrix:
    """
    Build T_B from geometric values at B.

    Raises:
        DomainError: If the determinant drifts from 1 beyond roundoff
    """
    if curve is CurveId.CIRCLE:
        c, s = geo_cos_sin(b, tol)
        m = SumMatrix(c, -s, s, c, curve)
    elif curve is CurveId.HYPERBOLA:
        c, s = geo_cosh_sinh(b, tol)
        m = SumMatrix(c, s, s, c, curve)
    else:
        m = SumMatrix(geo_exp(b, tol), 0.0, 0.0, geo_exp(-b, tol), curve)
    scale = max(1.0, abs(m.a11 * m.a22), abs(m.a12 * m.a21))
    if abs(m.det - 1.0) > 1e-12 * scale:
        raise DomainError(f"summation matrix determinant {m.det!r} is not 1")
    return m


# -- extension ladders -------------------------------------------------------------


def parallelogram_bound(x: float) -> float:
    """
    Area of the parallelogram fitted between the vertices at x, 2x and 3x.

    Equals 5 / (2 sqrt(9x^2 - 1) + 3 sqrt(4x^2 - 1)) * x / 3, which stays
    above 5/36 for every x >= 1.

    Raises:
        DomainError: If x < 1
    """
    if not x >= 1.0:
        raise DomainError(f"parallelogram construction needs x >= 1, got {x!r}")
    denom = 2.0 * sqrt(9.0 * x * x - 1.0) + 3.0 * sqrt(4.0 * x * x - 1.0)
    return 5.0 / denom * x / 3.0


@dataclass(frozen=True)
class ExtensionLadder:
    """
    Certified solvable-area ladder.

    Attributes:
        curve: Hyperbola (parallelogram steps) or skew (rectangle steps)
        target: Area to certify as solvable
        vertices: Vertex x-coordinates after each step, starting at 1
        gains: Certified area added by each step
    """

    curve: CurveId
    target: float
    vertices: List[float]
    gains: List[float]

    @property
    def steps(self) -> int:
        return len(self.gains)

    @property
    def certified_area(self) -> float:
        return math.fsum(self.gains)

    def to_dict(self) -> Dict[str, object]:
        return {
            "curve": self.curve.value,
            "target": self.target,
            "steps": self.steps,
            "certified_area": self.certified_area,
            "last_vertex": self.vertices[-1],
        }


def hyperbolic_extension_steps(a: float) -> ExtensionLadder:
    """
    Parallelogram steps certifying the half-area A/2 as solvable.

    Each step moves the vertex from x to 3x and adds at least the
    parallelogram between x and 2x, which is more than 1/9.

    Raises:
        DomainError: If A is negative or the vertex overflows
    """
    if not a >= 0.0:
        raise DomainError(f"ladder target must be nonnegative, got {a!r}")
    target = 0.5 * a
    vertices, gains = [1.0], []  # type: List[float], List[float]
    while math.fsum(gains) < target:
        x = vertices[-1]
        gains.append(parallelogram_bound(x))
        vertices.append(3.0 * x)
        if math.isinf(vertices[-1]):
            raise DomainError(f"hyperbolic ladder overflows before reaching {a!r}")
    return ExtensionLadder(CurveId.HYPERBOLA, target, vertices, gains)


def exp_extension_steps(a: float) -> ExtensionLadder:
    """
    Rectangle steps certifying the area A under xy = 1 as solvable.

    Each step moves the vertex from x to 2x; the rectangle of width x and
    height 1/(2x) fits under the curve and has area 1/2.
    """
    if not a >= 0.0:
        raise DomainError(f"ladder target must be nonnegative, got {a!r}")
    vertices, gains = [1.0], []  # type: List[float], List[float]
    while 0.5 * len(gains) < a:
        x = vertices[-1]
        gains.append(x * (1.0 / (2.0 * x)))
        vertices.append(2.0 * x)
        if math.isinf(vertices[-1]):
            raise DomainError(f"exp ladder overflows before reaching {a!r}")
    return ExtensionLadder(CurveId.SKEW, a, vertices, gains)
