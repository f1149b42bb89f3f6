"""
Bracketed integration and the fundamental theorem of calculus.

On a monotone piece the left and right rectangle sums are the integrals
of piecewise-constant functions below and above f, so they bracket the
area. ``integrate`` splits [a, b] into monotone pieces found by a
slope-sign scan, brackets each piece and adds the brackets. When the scan
finds too many turns it falls back to per-panel sampled extremes, which
is flagged non-rigorous.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.envelope import ErrorEnvelope
from ..core.jet import Jet1, continuity_jet0, evaluation_noise
from ..core.riemann import monotone_bracket, pairwise_sum
from ..errors import DomainError
from ..geometry.roots import golden_min
from ..utils.grids import DEFAULT_DEPTH, DEFAULT_GRID_POINTS, SLACK, UNIT_ROUNDOFF

logger = logging.getLogger(__name__)

Function = Callable[[float], float]

DEFAULT_WIDTH = 1e-6
SCAN_POINTS = 257
MAX_PANELS = 2**20
MAX_SEGMENTS = 64
FTC_MIN_EXPONENT = 2
FTC_MAX_EXPONENT = 20


@dataclass(frozen=True)
class IntegralBracket:
    """
    Enclosure [lo, hi] of the integral of f from a to b.

    Attributes:
        rigorous: Built from monotone pieces (False for the sampled fallback)
        converged: Width target met within the panel cap
    """

    lo: float
    hi: float
    n_panels: int
    a: float
    b: float
    rigorous: bool = True
    converged: bool = True

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise DomainError(f"bracket bounds out of order: [{self.lo!r}, {self.hi!r}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def to_dict(self) -> Dict[str, object]:
        return {
            "a": self.a,
            "b": self.b,
            "lo": self.lo,
            "hi": self.hi,
            "n_panels": self.n_panels,
            "rigorous": self.rigorous,
            "converged": self.converged,
        }


def _turning_point(f: Function, lo: float, hi: float, is_max: bool) -> float:
    sign = -1.0 if is_max else 1.0
    c, _ = golden_min(lambda x: sign * f(x), lo, hi)
    return c


def monotone_breakpoints(
    f: Function,
    a: float,
    b: float,
    scan_points: int = SCAN_POINTS,
    max_segments: int = MAX_SEGMENTS,
) -> Optional[List[float]]:
    """
    Interior turning points of f on [a, b] from a slope-sign scan.

    Flat steps count as monotone either way. Each sign change is refined
    by golden-section search inside the scan cells that contain it.

    Returns:
        Sorted breakpoints, or None when there are more than ``max_segments``
    """
    xs = np.linspace(a, b, scan_points)
    values = [f(float(x)) for x in xs]
    breaks: List[float] = []
    last_sign, last_index = 0.0, 0
    for i in range(len(xs) - 1):
        step = values[i + 1] - values[i]
        if step == 0.0:
            continue
        sign = 1.0 if step > 0.0 else -1.0
        if last_sign and sign != last_sign:
            breaks.append(
                _turning_point(f, float(xs[last_index]), float(xs[i + 1]), last_sign > 0.0)
            )
            if len(breaks) > max_segments:
                return None
        last_sign, last_index = sign, i
    return breaks


def _sampled_bracket(
    f: Function, a: float, b: float, width: float, max_panels: int
) -> Tuple[float, float, int, bool]:
    """Panel bounds from sampled extremes (endpoints and midpoint)."""
    n = 1
    while True:
        h = (b - a) / n
        nodes = [f(a + 0.5 * k * h) for k in range(2 * n + 1)]
        lows, highs = [], []
        for k in range(n):
            triple = nodes[2 * k : 2 * k + 3]
            lows.append(h * min(triple))
            highs.append(h * max(triple))
        lo, hi = pairwise_sum(lows), pairwise_sum(highs)
        if hi - lo <= width:
            return lo, hi, n, True
        if n >= max_panels:
            return lo, hi, n, False
        n *= 2


def integrate(
    f: Function,
    a: float,
    b: float,
    tol: float = DEFAULT_WIDTH,
    scan_points: int = SCAN_POINTS,
    max_panels: int = MAX_PANELS,
    breakpoints: Optional[Sequence[float]] = None,
    max_segments: int = MAX_SEGMENTS,
) -> IntegralBracket:
    """
    Bracket the integral of f from a to b to width ``tol``.

    Args:
        f: Continuous integrand
        a, b: Endpoints; b < a gives the sign-flipped bracket
        tol: Target bracket width, shared between pieces by length
        scan_points: Points in the slope-sign scan
        max_panels: Panel cap per piece; when reached the bracket is
                    returned with ``converged`` False
        breakpoints: Caller-supplied monotone pieces (skips the scan)
        max_segments: More turns than this switch to the sampled fallback

    Raises:
        DomainError: For non-finite endpoints or non-positive tol
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError(f"endpoints must be finite, got [{a!r}, {b!r}]")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    a, b = float(a), float(b)
    if a == b:
        return IntegralBracket(0.0, 0.0, 1, a, b)
    if b < a:
        flipped = integrate(f, b, a, tol, scan_points, max_panels, breakpoints, max_segments)
        return IntegralBracket(
            -flipped.hi, -flipped.lo, flipped.n_panels, a, b, flipped.rigorous, flipped.converged
        )

    if breakpoints is None:
        breaks = monotone_breakpoints(f, a, b, scan_points, max_segments)
    else:
        breaks = sorted(float(x) for x in breakpoints if a < x < b)

    if breaks is None:
        logger.warning(
            "[integral] more than %d turns on [%g, %g]; sampled bounds are not rigorous",
            max_segments, a, b,
        )
        lo, hi, n, converged = _sampled_bracket(f, a, b, tol, max_panels)
        return IntegralBracket(lo, hi, n, a, b, rigorous=False, converged=converged)

    edges = [a] + breaks + [b]
    total = b - a
    lows, highs, panels, converged = [], [], 0, True
    for left, right in zip(edges[:-1], edges[1:]):
        if right <= left:
            continue
        piece_tol = tol * (right - left) / total
        lo, hi, n = monotone_bracket(f, left, right, piece_tol, max_panels, strict=False)
        if hi - lo > piece_tol * SLACK:
            converged = False
        lows.append(lo)
        highs.append(hi)
        panels += n
    logger.debug("integrated over %d monotone pieces with %d panels", len(lows), panels)
    return IntegralBracket(pairwise_sum(lows), pairwise_sum(highs), panels, a, b, True, converged)


# -- fundamental theorem ----------------------------------------------------------------


def ftc_jet(
    f: Function,
    base: float,
    x1: float,
    tol: float = DEFAULT_WIDTH,
    radius: float = 0.5,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    fit_points: int = 161,
    inflate: float = 1.1,
) -> Jet1:
    """
    Jet of F(x) = integral of f from ``base`` to x, at x1.

    The value is the midpoint of the integral bracket and the slope is
    f(x1). With |f(x1 + t) - f(x1)| <= C |t|^p from the continuity jet of
    f at x1,

        |F(x1 + eps) - F(x1) - f(x1) eps| / |eps|
            = |(1/eps) * integral_0^eps (f(x1 + t) - f(x1)) dt| <= C |eps|^p / (p + 1)

    The envelope coefficient is C / (p + 1) inflated by the half-width of
    the integral bracket, the distance bound between the value and F(x1).

    Raises:
        CertificationError: If no continuity envelope certifies for f at x1
    """
    bracket = integrate(f, base, x1, tol)
    if not bracket.converged:
        logger.warning("[integral] F(%g) bracket width %g above target %g", x1, bracket.width, tol)
    cont = continuity_jet0(f, x1, radius, points, depth, fit_points, inflate)
    cert = cont.env.certified()
    coeff = cert.coeff / (cert.power + 1.0) + 0.5 * bracket.width
    env = ErrorEnvelope.analytic(coeff, cert.power, cert.radius)
    return Jet1(float(x1), bracket.mid, cont.value, env)


@dataclass(frozen=True)
class FtcCheck:
    """Sampled FTC contract on eps = L 2^-k."""

    passed: bool
    checked: int
    witness_eps: Optional[float] = None
    witness_value: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "witness_eps": self.witness_eps,
            "witness_value": self.witness_value,
        }


def ftc_grid(length: float) -> List[float]:
    """Symmetric geometric eps grid from 2^-2 to 2^-20 times ``length``."""
    length = length if length > 0.0 else 1.0
    right = [length * 2.0**-k for k in range(FTC_MIN_EXPONENT, FTC_MAX_EXPONENT + 1)]
    return [-e for e in right] + right


def verify_ftc(f: Function, jet: Jet1, base: float, noise_factor: float = 64.0) -> FtcCheck:
    """
    Sample |F(x1+eps) - F(x1) - f(x1) eps| <= |eps| * bound(eps).

    Increments F(x1+eps) - F(x1) are bracketed directly on [x1, x1+eps]
    with a width well under the allowed error; a sample passes when the
    whole bracket fits inside the allowance.
    """
    x1 = jet.x0
    grid = [e for e in ftc_grid(abs(x1 - base)) if abs(e) <= jet.radius]
    fx = jet.slope
    for eps in grid:
        allowed = abs(eps) * jet.env.bound(eps) * SLACK
        floor = (
            evaluation_noise(f, x1 + eps, f(x1 + eps), noise_factor)
            + noise_factor * UNIT_ROUNDOFF * abs(fx)
        ) * abs(eps)
        width = max(0.01 * allowed, floor, UNIT_ROUNDOFF * abs(eps))
        inc = integrate(f, x1, x1 + eps, width)
        lo = inc.lo - fx * eps
        hi = inc.hi - fx * eps
        if max(abs(lo), abs(hi)) > allowed + inc.width + floor:
            return FtcCheck(False, len(grid), eps, 0.5 * (lo + hi))
    return FtcCheck(True, len(grid))
