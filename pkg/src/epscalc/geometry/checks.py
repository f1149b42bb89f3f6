"""
Identity and inequality checks on the geometric functions.

Every check returns a CheckReport; failing checks are data, not exceptions.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from ..core.riemann import monotone_bracket
from ..utils.grids import UNIT_ROUNDOFF
from .areas import CurveId, pi, sector_area
from .functions import DEFAULT_TOL, geo_cos_sin, geo_cosh_sinh, geo_exp, geo_expm1, sum_matrix
from .roots import sqrt

logger = logging.getLogger(__name__)

NOISE_FACTOR = 64.0


@dataclass(frozen=True)
class CheckResult:
    """One comparison lhs vs rhs at a grid point."""

    check: str
    grid_point: object
    lhs: float
    rhs: float
    residual: float
    passed: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "check": self.check,
            "grid_point": self.grid_point,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "pass": self.passed,
        }


@dataclass
class CheckReport:
    """Collection of check results under a name."""

    name: str
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.results), default=0.0)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def add_equal(self, check: str, point: object, lhs: float, rhs: float, tol: float) -> None:
        """Record |lhs - rhs| <= tol * max(1, |lhs|, |rhs|)."""
        residual = abs(lhs - rhs)
        scale = max(1.0, abs(lhs), abs(rhs))
        self.results.append(CheckResult(check, point, lhs, rhs, residual, residual <= tol * scale))

    def add_leq(self, check: str, point: object, lhs: float, rhs: float, slack: float) -> None:
        """Record lhs <= rhs + slack; the residual is the excess (0 when it holds)."""
        excess = max(lhs - rhs, 0.0)
        self.results.append(CheckResult(check, point, lhs, rhs, excess, lhs <= rhs + slack))

    def extend(self, other: "CheckReport") -> None:
        self.results.extend(other.results)

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "pass": self.passed,
            "max_residual": self.max_residual,
            "checks": [r.to_dict() for r in self.results],
        }


def _pair(curve: CurveId, a: float, tol: float):
    """(first, second) components of the curve point for argument a."""
    if curve is CurveId.CIRCLE:
        return geo_cos_sin(a, tol)
    if curve is CurveId.HYPERBOLA:
        return geo_cosh_sinh(a, tol)
    return geo_exp(a, tol), geo_exp(-a, tol)


def verify_summation(
    curve: CurveId, a: float, b: float, tol: float = 1e-7
) -> CheckReport:
    """
    Addition formulas at (A, B), directly and through T_B.

    Circle:    cos(A+B) = cos A cos B - sin A sin B, sin(A+B) = sin A cos B + cos A sin B
    Hyperbola: cosh(A+B) = cosh A cosh B + sinh A sinh B, and the sinh analogue
    Skew:      exp(A+B) = exp A exp B

    The matrix route applies T_B to the curve point at A and compares with
    the point at A+B.
    """
    report = CheckReport(f"summation_{curve.value}")
    point = [a, b]
    x_a, y_a = _pair(curve, a, DEFAULT_TOL)
    x_b, y_b = _pair(curve, b, DEFAULT_TOL)
    x_ab, y_ab = _pair(curve, a + b, DEFAULT_TOL)

    if curve is CurveId.CIRCLE:
        report.add_equal("cos_sum", point, x_ab, x_a * x_b - y_a * y_b, tol)
        report.add_equal("sin_sum", point, y_ab, y_a * x_b + x_a * y_b, tol)
    elif curve is CurveId.HYPERBOLA:
        report.add_equal("cosh_sum", point, x_ab, x_a * x_b + y_a * y_b, tol)
        report.add_equal("sinh_sum", point, y_ab, y_a * x_b + x_a * y_b, tol)
    else:
        report.add_equal("exp_sum", point, x_ab, x_a * x_b, tol)

    matrix = sum_matrix(curve, b, DEFAULT_TOL)
    mx, my = matrix.apply(x_a, y_a)
    report.add_equal("matrix_x", point, x_ab, mx, tol)
    report.add_equal("matrix_y", point, y_ab, my, tol)
    return report


def verify_deriv_zero_inequalities(
    curve: CurveId, grid: Iterable[float], tol: float = DEFAULT_TOL
) -> CheckReport:
    """
    Squeeze inequalities that give the derivative at zero.

    Circle:    A cos A - A <= sin A - A <= 0
    Hyperbola: A cosh A - A >= sinh A - A >= 0
    Skew:      0 <= exp A - 1 - A <= (exp A - 1)^2 / 2  and  A >= (exp A - 1)/2

    Also checks that the derived error E(A) = (f(A) - A)/A is squeezed and
    shrinks as A decreases along the grid. Grid points must lie in (0, 0.5].
    """
    report = CheckReport(f"deriv_zero_{curve.value}")
    previous: Optional[float] = None
    for a in sorted(set(grid), reverse=True):
        if not 0.0 < a <= 0.5:
            continue
        slack = NOISE_FACTOR * UNIT_ROUNDOFF * a
        if curve is CurveId.CIRCLE:
            c, s = geo_cos_sin(a, tol)
            report.add_leq("lower", a, a * c - a, s - a, slack)
            report.add_leq("upper", a, s - a, 0.0, slack)
            err = (s - a) / a
            report.add_leq("error_lower", a, c - 1.0, err, slack)
            report.add_leq("error_upper", a, err, 0.0, slack)
        elif curve is CurveId.HYPERBOLA:
            c, s = geo_cosh_sinh(a, tol)
            report.add_leq("upper", a, s - a, a * c - a, slack)
            report.add_leq("lower", a, 0.0, s - a, slack)
            err = (s - a) / a
            report.add_leq("error_upper", a, err, c - 1.0, slack)
            report.add_leq("error_lower", a, 0.0, err, slack)
        else:
            d = geo_expm1(a, tol)
            report.add_leq("lower", a, 0.0, d - a, slack)
            report.add_leq("upper", a, d - a, 0.5 * d * d, slack)
            report.add_leq("half_bound", a, 0.5 * d, a, slack)
            err = (d - a) / a
            report.add_leq("error_upper", a, err, 0.5 * d * d / a, slack)
            report.add_leq("error_lower", a, 0.0, err, slack)
        if previous is not None:
            report.add_leq("error_shrinks", a, abs(err), previous, slack)
        previous = abs(err)
    return report


def exp_negative_region_check(
    a: float, tol: float = 1e-6, max_panels: int = 2**24
) -> CheckReport:
    """
    Two regions defining exp(-A) have area A.

    With x0 = exp(-A): the region under xy = 1 for x0 < x < 1, and the region
    between the y-axis and the curve for 1 < y < 1/x0. Both brackets must
    contain A.
    """
    report = CheckReport("exp_negative_region")
    x0 = geo_exp(-a, DEFAULT_TOL)
    under = sector_area(CurveId.SKEW, x0, tol, max_panels)
    lo, hi, _ = monotone_bracket(lambda y: 1.0 / y, 1.0, 1.0 / x0, tol, max_panels)
    slack = NOISE_FACTOR * UNIT_ROUNDOFF * max(1.0, a)

    under_lo, under_hi = -under.hi, -under.lo
    for name, b_lo, b_hi in (("under_curve", under_lo, under_hi), ("beside_curve", lo, hi)):
        mid = 0.5 * (b_lo + b_hi)
        inside = b_lo - slack <= a <= b_hi + slack
        report.results.append(CheckResult(name, a, mid, a, abs(mid - a), inside))
    overlap = max(under_lo, lo) <= min(under_hi, hi) + slack
    m_under, m_beside = 0.5 * (under_lo + under_hi), 0.5 * (lo + hi)
    report.results.append(
        CheckResult("regions_agree", a, m_under, m_beside, abs(m_under - m_beside), overlap)
    )
    logger.debug("exp(-%g) regions: [%g, %g] and [%g, %g]", a, under_lo, under_hi, lo, hi)
    return report


def pythagorean_residuals(grid: Iterable[float], tol: float = DEFAULT_TOL) -> CheckReport:
    """cos^2 + sin^2 = 1, cosh^2 - sinh^2 = 1 and exp(A) exp(-A) = 1 on a grid."""
    report = CheckReport("identities")
    for a in grid:
        c, s = geo_cos_sin(a, tol)
        report.add_equal("circle", a, c * c + s * s, 1.0, 1e-8)
        ch, sh = geo_cosh_sinh(a, tol)
        # relative to cosh^2, the size of the terms being differenced
        rel = abs(ch * ch - sh * sh - 1.0) / max(1.0, ch * ch)
        report.results.append(CheckResult("hyperbola", a, ch * ch - sh * sh, 1.0, rel, rel <= 1e-8))
        report.add_equal("skew", a, geo_exp(a, tol) * geo_exp(-a, tol), 1.0, 1e-8)
    return report


def matrix_maps_curve(curve: CurveId, b: float, points: Iterable[float]) -> CheckReport:
    """T_B maps sampled curve points back onto the curve."""
    report = CheckReport(f"matrix_invariance_{curve.value}")
    m = sum_matrix(curve, b)
    for a in points:
        x, y = _pair(curve, a, DEFAULT_TOL)
        u, v = m.apply(x, y)
        if curve is CurveId.CIRCLE:
            lhs, scale = u * u + v * v, 1.0
        elif curve is CurveId.HYPERBOLA:
            lhs, scale = u * u - v * v, max(1.0, u * u)
        else:
            lhs, scale = u * v, 1.0
        rel = abs(lhs - 1.0) / scale
        report.results.append(CheckResult("on_curve", [a, b], lhs, 1.0, rel, rel <= 1e-9))
    return report


def closed_form_table(tol: float = DEFAULT_TOL) -> CheckReport:
    """cos/sin at 0, pi/4, pi/2, 3pi/4 and pi against their closed forms."""
    p = pi()
    r = sqrt(0.5)
    table = [
        (0.0, 1.0, 0.0),
        (p / 4.0, r, r),
        (p / 2.0, 0.0, 1.0),
        (3.0 * p / 4.0, -r, r),
        (p, -1.0, 0.0),
    ]
    report = CheckReport("trig_table")
    for a, c_ref, s_ref in table:
        c, s = geo_cos_sin(a, tol)
        report.add_equal("cos", a, c, c_ref, 1e-8)
        report.add_equal("sin", a, s, s_ref, 1e-8)
    return report
