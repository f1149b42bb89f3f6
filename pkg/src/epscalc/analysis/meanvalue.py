"""
Mean-value witnesses and L'Hopital limits.

The existence theorems (critical point, mean value, Cauchy mean value)
say a point c exists; the routines here search for it. The search is a
uniform scan of the closed interval followed by refinement, and every
witness reports the residual of the equality it claims, re-evaluated
through the jet of the function at c.

L'Hopital comes in two forms:

- ``lhopital_00`` combines two jets with zero values at x0 into the
  limit f'/g' and an envelope for the ratio's error
- ``lhopital_general`` samples f/g on one side of x0, fits a dominating
  C|eps|^p to |f/g - L| and certifies it on a dense grid. It covers the
  0/0 case and the case where 1/g tends to zero
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.envelope import (
    EnvelopeFit,
    ErrorEnvelope,
    NoiseModel,
    env_scale_bounded,
    env_sum,
    find_violation,
    fit_envelope,
)
from ..core.jet import MAX_SHRINKS, Jet1, bases_match, evaluation_noise
from ..errors import (
    BaseMismatchError,
    CertificationError,
    CertificationRequiredError,
    DomainError,
    EpscalcError,
    PreconditionError,
)
from ..geometry.roots import golden_min
from ..utils.grids import (
    DEFAULT_DEPTH,
    DEFAULT_GRID_POINTS,
    SLACK,
    UNIT_ROUNDOFF,
    certification_grid,
    one_sided_grid,
)

logger = logging.getLogger(__name__)

Function = Callable[[float], float]
JetProvider = Callable[[float], Jet1]

SCAN_POINTS = 1024
REFINE_ITERATIONS = 200
ZERO_VALUE_TOL = 1e-12
NOISE_FACTOR = 64.0
# fitted residual powers at or below this do not count as shrinking
MIN_SHRINK_POWER = 0.25


@dataclass(frozen=True)
class Witness:
    """
    Outcome of a witness search.

    Attributes:
        op: "critical", "mvt" or "cmvt"
        c: Interior point found, or None when the extremum sits on the boundary
        residual: Defect of the asserted equality at c
        iterations: Refinement iterations spent
        tol: Requested bound on the residual
    """

    op: str
    c: Optional[float]
    residual: float
    iterations: int
    tol: float

    @property
    def found(self) -> bool:
        return self.c is not None

    @property
    def passed(self) -> bool:
        return self.c is not None and self.residual <= self.tol

    def to_dict(self) -> Dict[str, object]:
        return {
            "op": self.op,
            "c": self.c,
            "residual": self.residual,
            "iterations": self.iterations,
            "pass": self.passed,
        }


# -- witness search ---------------------------------------------------------------


def _scan(h: Function, a: float, b: float, points: int) -> Tuple[np.ndarray, np.ndarray]:
    xs = np.linspace(a, b, points)
    values = np.array([h(float(x)) for x in xs])
    return xs, values


def _slope_root(slope: Function, lo: float, hi: float, max_iter: int) -> Tuple[float, int]:
    """Bisect a sign change of ``slope`` on [lo, hi] down to one ulp."""
    s_lo = slope(lo)
    for i in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid, i
        s_mid = slope(mid)
        if s_mid == 0.0:
            return mid, i
        if (s_mid < 0.0) == (s_lo < 0.0):
            lo, s_lo = mid, s_mid
        else:
            hi = mid
    return 0.5 * (lo + hi), max_iter


def _refine(
    h: Function,
    slope: Function,
    xs: np.ndarray,
    i: int,
    sign: float,
    max_iter: int,
) -> Tuple[float, int]:
    """Refine the extremum near scan index i; sign is +1 for a minimum, -1 for a maximum."""
    lo, hi = float(xs[i - 1]), float(xs[i + 1])
    s_lo, s_hi = slope(lo), slope(hi)
    if s_lo * s_hi < 0.0:
        return _slope_root(slope, lo, hi, max_iter)
    return golden_min(lambda x: sign * h(x), lo, hi, max_iter)


def _critical_point(
    op: str,
    h: Function,
    residual: Function,
    slope: Function,
    a: float,
    b: float,
    tol: float,
    scan_points: int,
    max_iter: int,
) -> Witness:
    if not a < b:
        raise DomainError(f"need a < b, got [{a!r}, {b!r}]")
    xs, values = _scan(h, a, b, scan_points)
    last = len(xs) - 1

    if values.max() == values.min():
        c = float(xs[1])
        return Witness(op, c, residual(c), 0, tol)

    candidates = []
    for idx, sign in ((int(np.argmin(values)), 1.0), (int(np.argmax(values)), -1.0)):
        if 0 < idx < last:
            candidates.append((idx, sign))
    if not candidates:
        logger.info("%s: extremum on the boundary of [%g, %g], no witness", op, a, b)
        return Witness(op, None, math.inf, 0, tol)

    best: Optional[Witness] = None
    for idx, sign in sorted(candidates):
        c, iterations = _refine(h, slope, xs, idx, sign, max_iter)
        if not a < c < b:
            c = float(xs[idx])
        w = Witness(op, c, residual(c), iterations, tol)
        logger.debug("%s candidate c=%.17g residual=%g", op, c, w.residual)
        if w.passed:
            return w
        if best is None or w.residual < best.residual:
            best = w
    return best  # type: ignore[return-value]


def find_critical(
    f: Function,
    f_jet: JetProvider,
    a: float,
    b: float,
    tol: float = 1e-9,
    scan_points: int = SCAN_POINTS,
    max_iter: int = REFINE_ITERATIONS,
) -> Witness:
    """
    Interior extremizer c of f on [a, b] with |f'(c)| <= tol.

    The extremum is located on a uniform scan, then refined by bisecting
    the jet slope when it changes sign, or by golden-section search
    otherwise. Among interior candidates the smallest c is preferred.

    Returns:
        Witness; ``c`` is None when both extrema sit on the boundary
    """
    slope = lambda x: f_jet(x).slope  # noqa: E731
    return _critical_point(
        "critical", f, lambda c: abs(slope(c)), slope, a, b, tol, scan_points, max_iter
    )


def mvt_witness(
    f: Function,
    f_jet: JetProvider,
    a: float,
    b: float,
    tol: float = 1e-9,
    scan_points: int = SCAN_POINTS,
    max_iter: int = REFINE_ITERATIONS,
) -> Witness:
    """
    Point c with f'(c) = (f(b) - f(a)) / (b - a).

    Searches for a critical point of h(x) = f(x) - m x, which takes equal
    values at both ends.
    """
    m = (f(b) - f(a)) / (b - a)
    h = lambda x: f(x) - m * x  # noqa: E731
    slope = lambda x: f_jet(x).slope - m  # noqa: E731
    return _critical_point("mvt", h, lambda c: abs(slope(c)), slope, a, b, tol, scan_points, max_iter)


def cmvt_witness(
    f: Function,
    g: Function,
    f_jet: JetProvider,
    g_jet: JetProvider,
    a: float,
    b: float,
    tol: float = 1e-9,
    scan_points: int = SCAN_POINTS,
    max_iter: int = REFINE_ITERATIONS,
) -> Witness:
    """
    Point c with f'(c) / g'(c) = (f(b) - f(a)) / (g(b) - g(a)).

    Raises:
        PreconditionError: If g' vanishes or changes sign on the scan grid,
            or g(a) = g(b)
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a!r}, {b!r}]")
    guard = [g_jet(float(x)).slope for x in np.linspace(a, b, scan_points)[1:-1]]
    if any(s == 0.0 for s in guard) or (min(guard) < 0.0 < max(guard)):
        raise PreconditionError("g' vanishes on the guard grid")
    dg = g(b) - g(a)
    if dg == 0.0:
        raise PreconditionError("g(a) = g(b)")
    m = (f(b) - f(a)) / dg
    h = lambda x: f(x) - m * g(x)  # noqa: E731
    slope = lambda x: f_jet(x).slope - m * g_jet(x).slope  # noqa: E731

    def residual(c: float) -> float:
        return abs(f_jet(c).slope / g_jet(c).slope - m)

    return _critical_point("cmvt", h, residual, slope, a, b, tol, scan_points, max_iter)


# -- L'Hopital ----------------------------------------------------------------------


@dataclass(frozen=True)
class LimitVerdict:
    """
    Certified (or refuted) limit of f/g at x0.

    Attributes:
        op: "lhopital_00" or "lhopital_general"
        x0: Limit point
        limit: L, computed or claimed
        env: Envelope for f/g - L near x0 (one-sided for the general form)
        passed: Sampling found no violation of the envelope
        case: "zero_zero" or "unbounded"
        witness_eps / witness_value: First violation when not passed
        fit: Fitted envelope of the ratio residual
        derivative_fit: Fitted envelope of f'/g' - L when jets were given
    """

    op: str
    x0: float
    limit: float
    env: Optional[ErrorEnvelope]
    passed: bool
    case: str = "zero_zero"
    side: int = 0
    witness_eps: Optional[float] = None
    witness_value: Optional[float] = None
    fit: Optional[EnvelopeFit] = None
    derivative_fit: Optional[EnvelopeFit] = None

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "op": self.op,
            "x0": self.x0,
            "L": self.limit,
            "case": self.case,
            "env": self.env.to_dict() if self.env is not None else None,
            "pass": self.passed,
        }
        if self.side:
            out["side"] = "right" if self.side > 0 else "left"
        if self.witness_eps is not None:
            out["witness_eps"] = self.witness_eps
            out["witness_value"] = self.witness_value
        if self.fit is not None:
            out["fit"] = self.fit.to_dict()
        if self.derivative_fit is not None:
            out["derivative_fit"] = self.derivative_fit.to_dict()
        return out


def lhopital_00(
    f_jet: Jet1,
    g_jet: Jet1,
    f: Optional[Function] = None,
    g: Optional[Function] = None,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    noise: Optional[NoiseModel] = None,
) -> LimitVerdict:
    """
    Limit of f/g at x0 from two jets with zero values.

    With f = sf eps + |eps| Ef and g = sg eps + |eps| Eg, once |Eg| <= |sg|/2

        |f/g - sf/sg| <= 2 |Ef| / |sg| + 2 |sf| |Eg| / sg^2

    When f and g are given the envelope is also checked against sampled
    f(x0+eps)/g(x0+eps) - L.

    Raises:
        BaseMismatchError: If the jets sit at different points
        PreconditionError: If a value is nonzero or g has zero slope
    """
    if not bases_match(f_jet.x0, g_jet.x0):
        raise BaseMismatchError(f"lhopital_00: base points differ ({f_jet.x0!r} vs {g_jet.x0!r})")
    if abs(f_jet.value) > ZERO_VALUE_TOL or abs(g_jet.value) > ZERO_VALUE_TOL:
        raise PreconditionError(
            f"f(x0) = {f_jet.value!r} and g(x0) = {g_jet.value!r} must both vanish"
        )
    sf, sg = f_jet.slope, g_jet.slope
    if sg == 0.0:
        raise PreconditionError("g'(x0) = 0; use the general form")
    limit = sf / sg

    ef, eg = f_jet.env.certified(), g_jet.env.certified()
    r = min(ef.radius, eg.radius, 1.0)
    for _ in range(MAX_SHRINKS):
        if eg.coeff * r**eg.power <= abs(sg) / 2.0:
            break
        r *= 0.5
    else:
        raise CertificationRequiredError("lhopital_00: working radius collapsed")
    env = env_sum(
        env_scale_bounded(ef.with_radius(r), 2.0 / abs(sg)),
        env_scale_bounded(eg.with_radius(r), 2.0 * abs(sf) / (sg * sg)),
    )

    x0 = f_jet.x0
    if f is None or g is None:
        return LimitVerdict("lhopital_00", x0, limit, env, True)

    def sampler(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        return f(x0 + eps) / g(x0 + eps) - limit

    noise = noise or (lambda eps: NOISE_FACTOR * UNIT_ROUNDOFF * max(1.0, abs(limit)))
    violation = find_violation(env, sampler, r, points, depth, noise)
    sampled = ErrorEnvelope.analytic(env.coeff, env.power, env.radius, sampler)
    if violation is not None:
        logger.warning("lhopital_00 envelope violated at eps=%g", violation[0])
        return LimitVerdict("lhopital_00", x0, limit, sampled, False, "zero_zero", 0, *violation)
    return LimitVerdict("lhopital_00", x0, limit, sampled, True)


def _evaluate(fn: Function, x: float, eps: float) -> float:
    try:
        return float(fn(x))
    except (ArithmeticError, ValueError, EpscalcError) as err:
        raise CertificationError(f"evaluation failed ({err})", eps, float("nan"))


def _tends_to_zero(values: Sequence[float], eps: Sequence[float], noise: Sequence[float]) -> bool:
    try:
        fit = fit_envelope(eps, values, noise)
    except CertificationError:
        return False
    return fit.resolved < 2 or fit.fitted_power > MIN_SHRINK_POWER


def lhopital_general(
    f: Function,
    g: Function,
    x0: float,
    side: int,
    claimed: float,
    f_jet: Optional[JetProvider] = None,
    g_jet: Optional[JetProvider] = None,
    radius: float = 0.5,
    depth: int = DEFAULT_DEPTH,
    points: int = DEFAULT_GRID_POINTS,
    inflate: float = 1.1,
    noise_factor: float = NOISE_FACTOR,
) -> LimitVerdict:
    """
    One-sided limit of f/g at x0 checked against a claimed value.

    Samples on eps_k = side * radius * 2^-k, k = 0..depth, decide the case:
    both f and g tend to zero, or 1/g does. The ratio residual
    |f/g - claimed| is fitted with a dominating C|eps|^p (inflated) and
    certified on a dense one-sided grid. With jet providers, the residual
    of f'/g' is fitted as well.

    Raises:
        DomainError: If side is not +1 or -1
        PreconditionError: If neither f, g -> 0 nor 1/g -> 0 on the samples
        CertificationError: If g vanishes at a sample or f, g cannot be evaluated
    """
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side!r}")
    x0 = float(x0)
    eps_fit = one_sided_grid(radius, depth, side)

    fv, gv, fn, gn = [], [], [], []
    for eps in eps_fit:
        x = x0 + eps
        fx, gx = _evaluate(f, x, eps), _evaluate(g, x, eps)
        if gx == 0.0:
            raise CertificationError("g vanishes at a sample point", eps, gx)
        fv.append(fx)
        gv.append(gx)
        fn.append(evaluation_noise(f, x, fx, noise_factor))
        gn.append(evaluation_noise(g, x, gx, noise_factor))

    if _tends_to_zero(fv, eps_fit, fn) and _tends_to_zero(gv, eps_fit, gn):
        case = "zero_zero"
    else:
        inv = [1.0 / v for v in gv]
        inv_noise = [n / (v * v) for n, v in zip(gn, gv)]
        if not _tends_to_zero(inv, eps_fit, inv_noise):
            raise PreconditionError("neither f, g -> 0 nor 1/g -> 0 near x0")
        case = "unbounded"
    logger.debug("lhopital_general at x0=%g side=%d: %s case", x0, side, case)

    def sampler(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        gx = _evaluate(g, x0 + eps, eps)
        if gx == 0.0:
            raise CertificationError("g vanishes at a sample point", eps, gx)
        return _evaluate(f, x0 + eps, eps) / gx - claimed

    def noise(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        x = x0 + eps
        fx, gx = f(x), g(x)
        ratio = fx / gx
        nf = evaluation_noise(f, x, fx, noise_factor)
        ng = evaluation_noise(g, x, gx, noise_factor)
        return (nf + abs(ratio) * ng) / abs(gx) + noise_factor * UNIT_ROUNDOFF * abs(ratio)

    residuals = [fx / gx - claimed for fx, gx in zip(fv, gv)]
    try:
        fit = fit_envelope(eps_fit, residuals, [noise(e) for e in eps_fit], radius, inflate, sampler)
    except CertificationError as err:
        logger.info("ratio residual does not shrink: %s", err)
        return LimitVerdict(
            "lhopital_general", x0, claimed, None, False, case, side, err.eps, err.value
        )
    if fit.resolved and fit.fitted_power <= MIN_SHRINK_POWER:
        logger.info("ratio residual does not shrink (fitted p=%.4g)", fit.fitted_power)
        return LimitVerdict(
            "lhopital_general", x0, claimed, fit.envelope, False, case, side,
            eps_fit[-1], residuals[-1], fit,
        )

    derivative_fit = None
    if f_jet is not None and g_jet is not None:
        derivative_fit = _derivative_ratio_fit(f_jet, g_jet, x0, eps_fit, claimed, radius, inflate)

    dense = [side * float(t) for t in certification_grid(radius, points, depth) if t > 0.0]
    witness = _first_violation(fit.envelope, sampler, dense, noise)
    if witness is not None:
        logger.warning("lhopital_general envelope violated at eps=%g", witness[0])
        return LimitVerdict(
            "lhopital_general", x0, claimed, fit.envelope, False, case, side,
            witness[0], witness[1], fit, derivative_fit,
        )
    return LimitVerdict(
        "lhopital_general", x0, claimed, fit.envelope, True, case, side,
        None, None, fit, derivative_fit,
    )


def _first_violation(
    env: ErrorEnvelope, sampler: Function, grid: Sequence[float], noise: NoiseModel
) -> Optional[Tuple[float, float]]:
    for eps in grid:
        value = sampler(eps)
        if value != value or abs(value) > env.bound(eps) * SLACK + noise(eps):
            return eps, value
    return None


def _derivative_ratio_fit(
    f_jet: JetProvider,
    g_jet: JetProvider,
    x0: float,
    eps_fit: List[float],
    claimed: float,
    radius: float,
    inflate: float,
) -> Optional[EnvelopeFit]:
    """Fit |f'/g' - L| on the one-sided grid; None if it cannot be sampled."""
    eps_used, residuals = [], []
    for eps in eps_fit:
        try:
            sg = g_jet(x0 + eps).slope
            if sg == 0.0:
                continue
            residuals.append(f_jet(x0 + eps).slope / sg - claimed)
            eps_used.append(eps)
        except EpscalcError as err:
            logger.debug("derivative ratio unavailable at eps=%g: %s", eps, err)
    if len(eps_used) < 2:
        return None
    try:
        return fit_envelope(eps_used, residuals, None, radius, inflate)
    except CertificationError as err:
        logger.info("derivative ratio does not shrink: %s", err)
        return None
