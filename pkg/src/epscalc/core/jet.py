"""
First-order jets and the derivative-rule algebra.

A Jet1 at x0 is the triple (value, slope, env) realizing

    f(x0 + eps) = value + slope * eps + |eps| * E(eps),   |E(eps)| <= C |eps|^p

on the envelope radius. Every rule below builds the new slope by the usual
derivative rule and the new envelope from the operands' own contracts, so
a composite jet carries its certificate with it.

A Jet0 is the continuity analogue: |f(x0 + eps) - value| <= C |eps|^p.

Radii only shrink through the rules and are clamped to 1, so that
|eps|^q <= |eps|^p whenever q >= p.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from ..errors import (
    BaseMismatchError,
    CertificationError,
    CertificationRequiredError,
    DomainError,
    EpscalcError,
    NotInvertibleError,
)
from ..geometry.roots import int_power, nth_root
from ..utils.grids import (
    DEFAULT_DEPTH,
    DEFAULT_GRID_POINTS,
    SLACK,
    UNIT_ROUNDOFF,
    certification_grid,
)
from .envelope import (
    ErrorEnvelope,
    NoiseModel,
    env_compose,
    env_scale_bounded,
    env_sum,
    find_violation,
    fit_envelope,
)

logger = logging.getLogger(__name__)

BASE_RTOL = 1e-12
MAX_SHRINKS = 200


@dataclass(frozen=True)
class Jet1:
    """Best first-order approximation of f near x0."""

    x0: float
    value: float
    slope: float
    env: ErrorEnvelope

    @property
    def radius(self) -> float:
        return self.env.radius

    def predict(self, eps: float) -> float:
        """Linear part value + slope * eps."""
        return self.value + self.slope * eps

    def sup_abs(self) -> float:
        """Bound on |f| over [x0 - r, x0 + r] implied by the contract."""
        r = self.radius
        env = self.env.certified()
        return abs(self.value) + abs(self.slope) * r + env.coeff * r ** (env.power + 1.0)

    def deviation_bound(self) -> float:
        """Bound K with |f(x0+eps) - value| <= K |eps| on the radius."""
        return abs(self.slope) + self.env.sup_bound()

    def to_dict(self) -> Dict[str, object]:
        return {
            "x0": self.x0,
            "value": self.value,
            "slope": self.slope,
            "env": self.env.to_dict(),
        }


@dataclass(frozen=True)
class Jet0:
    """Continuity certificate: f is well-approximated by a constant near x0."""

    x0: float
    value: float
    env: ErrorEnvelope

    @property
    def radius(self) -> float:
        return self.env.radius

    def sup_abs(self) -> float:
        return abs(self.value) + self.env.sup_bound()

    def to_dict(self) -> Dict[str, object]:
        return {"x0": self.x0, "value": self.value, "env": self.env.to_dict()}


def bases_match(x: float, y: float) -> bool:
    """Base points agree up to a relative 1e-12."""
    return abs(x - y) <= BASE_RTOL * max(1.0, abs(x), abs(y))


def _check_base(x: float, y: float, what: str) -> None:
    if not bases_match(x, y):
        raise BaseMismatchError(f"{what}: base points differ ({x!r} vs {y!r})")


def _shrink_radius(radius: float, ok: Callable[[float], bool], what: str) -> float:
    """Halve ``radius`` until ``ok(radius)`` holds."""
    r = min(radius, 1.0)
    for _ in range(MAX_SHRINKS):
        if ok(r):
            return r
        r *= 0.5
    raise CertificationRequiredError(f"{what}: working radius collapsed")


def _analytic(coeff: float, power: float, radius: float) -> ErrorEnvelope:
    if coeff == 0.0:
        return ErrorEnvelope.zero(radius)
    return ErrorEnvelope.analytic(coeff, power, radius)


def _restrict(env: ErrorEnvelope, radius: float) -> ErrorEnvelope:
    return env.certified().with_radius(radius)


# -- Jet1 constructors -------------------------------------------------------


def jet_const(c: float, x0: float) -> Jet1:
    return Jet1(float(x0), float(c), 0.0, ErrorEnvelope.zero(1.0))


def jet_var(x0: float) -> Jet1:
    return Jet1(float(x0), float(x0), 1.0, ErrorEnvelope.zero(1.0))


# -- linear rules -------------------------------------------------------------


def jet_add(a: Jet1, b: Jet1) -> Jet1:
    """Sum rule."""
    _check_base(a.x0, b.x0, "jet_add")
    return Jet1(a.x0, a.value + b.value, a.slope + b.slope, env_sum(a.env, b.env))


def jet_neg(a: Jet1) -> Jet1:
    return Jet1(a.x0, -a.value, -a.slope, a.env.certified())


def jet_sub(a: Jet1, b: Jet1) -> Jet1:
    _check_base(a.x0, b.x0, "jet_sub")
    return Jet1(a.x0, a.value - b.value, a.slope - b.slope, env_sum(a.env, b.env))


def jet_scale(a: Jet1, k: float) -> Jet1:
    """Constant multiple k*f."""
    return Jet1(a.x0, k * a.value, k * a.slope, env_scale_bounded(a.env, abs(k)))


# -- product, reciprocal, quotient -------------------------------------------


def jet_mul(a: Jet1, b: Jet1) -> Jet1:
    """
    Product rule.

    With f = va + sa*eps + |eps|Ea and g = vb + sb*eps + |eps|Eb the
    remainder of f*g divided by |eps| is

        Ea * g(x0+eps) + Eb * (va + sa*eps) + sa*sb*|eps|*sgn(eps)

    so each term is an error function times a bounded function.
    """
    _check_base(a.x0, b.x0, "jet_mul")
    r = min(a.radius, b.radius, 1.0)
    ea, eb = _restrict(a.env, r), _restrict(b.env, r)
    g_bound = abs(b.value) + abs(b.slope) * r + eb.coeff * r ** (eb.power + 1.0)
    f_lin_bound = abs(a.value) + abs(a.slope) * r
    env = env_sum(
        env_sum(env_scale_bounded(ea, g_bound), env_scale_bounded(eb, f_lin_bound)),
        _analytic(abs(a.slope * b.slope), 1.0, r),
    )
    return Jet1(a.x0, a.value * b.value, a.slope * b.value + a.value * b.slope, env)


def jet_recip(a: Jet1) -> Jet1:
    """
    Reciprocal 1/f.

    The radius shrinks until |f(x0+eps) - f(x0)| <= |f(x0)|/2, which keeps
    |f| >= |f(x0)|/2 on the working interval.

    Raises:
        DomainError: If f(x0) = 0
        CertificationRequiredError: If the radius collapses
    """
    v = a.value
    if v == 0.0:
        raise DomainError(f"reciprocal of a jet with zero value at x0={a.x0!r}")
    cert = a.env.certified()
    s = abs(a.slope)

    def bounded_away(r: float) -> bool:
        return s * r + cert.coeff * r ** (cert.power + 1.0) <= abs(v) / 2.0

    r = _shrink_radius(a.radius, bounded_away, "jet_recip")
    if r < a.radius:
        logger.debug("jet_recip: radius shrunk to %g at x0=%g", r, a.x0)
    e = cert.with_radius(r)
    cross = 2.0 * s * (s + e.coeff * r**e.power) / abs(v) ** 3
    env = env_sum(_analytic(cross, 1.0, r), env_scale_bounded(e, 2.0 / (v * v)))
    return Jet1(a.x0, 1.0 / v, -a.slope / (v * v), env)


def jet_div(a: Jet1, b: Jet1) -> Jet1:
    """Quotient rule as a * (1/b)."""
    _check_base(a.x0, b.x0, "jet_div")
    return jet_mul(a, jet_recip(b))


# -- chain and inverse --------------------------------------------------------


def jet_chain(outer: Jet1, inner: Jet1) -> Jet1:
    """
    Chain rule: jet of F(g(x)) at x0 from F's jet at g(x0) and g's jet at x0.

    The inner increment eta = g(x0+eps) - g(x0) satisfies |eta| <= K|eps|
    with K = |g'| + sup|Eg|, and the inner radius is shrunk so that eta stays
    inside the outer radius. The remainder over |eps| is

        F' * Eg(eps) + (|eta|/|eps|) * EF(eta)

    Raises:
        BaseMismatchError: If outer.x0 differs from inner.value
        CertificationRequiredError: If the radius collapses
    """
    _check_base(outer.x0, inner.value, "jet_chain")
    ei = inner.env.certified()
    eo = outer.env.certified()
    r = min(inner.radius, 1.0)
    k = abs(inner.slope) + ei.coeff * r**ei.power

    r = _shrink_radius(r, lambda rr: k * rr <= outer.radius, "jet_chain")
    ei = ei.with_radius(r)
    moved = env_compose(eo, _analytic(k, 1.0, r)) if k > 0.0 else ErrorEnvelope.zero(r)
    env = env_sum(env_scale_bounded(ei, abs(outer.slope)), env_scale_bounded(moved, k))
    return Jet1(inner.x0, outer.value, outer.slope * inner.slope, env)


def jet_inverse(f_jet: Jet1) -> Jet1:
    """
    Inverse function rule.

    Given the jet of an invertible f at y0 (with f(y0) = x), returns the jet
    of g = f^-1 at x. The forward radius rho shrinks until
    sup|E| <= |f'|/2; then |g(x+d) - y0| <= 2|d|/|f'| and

        |E_g(d)| <= C * 2^(1+p) / |f'|^(2+p) * |d|^p  for |d| <= |f'| rho / 2

    Raises:
        NotInvertibleError: If the slope is zero
        CertificationRequiredError: If the radius collapses
    """
    s = f_jet.slope
    if s == 0.0:
        raise NotInvertibleError(f"slope is zero at {f_jet.x0!r}; not invertible to first order")
    cert = f_jet.env.certified()
    rho = _shrink_radius(
        f_jet.radius, lambda rr: cert.coeff * rr**cert.power <= abs(s) / 2.0, "jet_inverse"
    )
    radius = min(abs(s) * rho / 2.0, 1.0)
    coeff = cert.coeff * 2.0 ** (1.0 + cert.power) / abs(s) ** (2.0 + cert.power)
    return Jet1(f_jet.value, f_jet.x0, 1.0 / s, _analytic(coeff, cert.power, radius))


# -- powers -------------------------------------------------------------------


def _binomial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def jet_monomial(n: int, x0: float) -> Jet1:
    """
    Jet of x^n at x0 from the binomial expansion, on radius 1.

    The terms of order two and higher give the remainder; over |eps| they
    are bounded by |eps| * sum_{k>=2} C(n,k) |x0|^(n-k).

    Raises:
        DomainError: If n < 1
    """
    if n < 1:
        raise DomainError(f"monomial degree must be positive, got {n}")
    ax = abs(x0)
    coeff = float(sum(_binomial(n, k) * int_power(ax, n - k) for k in range(2, n + 1)))
    value = int_power(x0, n)
    slope = n * int_power(x0, n - 1)
    return Jet1(float(x0), value, float(slope), _analytic(coeff, 1.0, 1.0))


def jet_rational_power(num: int, den: int, x0: float) -> Jet1:
    """
    Jet of x^(num/den) at x0 > 0 by implicit differentiation.

    y = x^(1/den) is the inverse of y -> y^den, so its jet comes from the
    inverse rule applied to the monomial jet at the den-th root; the power
    num then follows from the chain rule (and the reciprocal rule when num
    is negative).

    Raises:
        DomainError: If x0 <= 0 or den < 1
    """
    if den < 1:
        raise DomainError(f"exponent denominator must be positive, got {den}")
    if not x0 > 0.0:
        raise DomainError(f"rational power needs a positive base, got {x0!r}")
    q = Fraction(num, den)
    num, den = q.numerator, q.denominator
    if num == 0:
        return jet_const(1.0, x0)

    if den == 1:
        root = jet_var(x0)
    else:
        y = nth_root(x0, den)
        root = jet_inverse(jet_monomial(den, y))
        if root.x0 != x0:
            _check_base(root.x0, x0, "jet_rational_power")
            root = Jet1(float(x0), root.value, root.slope, root.env)

    jet = root if abs(num) == 1 else jet_chain(jet_monomial(abs(num), root.value), root)
    return jet_recip(jet) if num < 0 else jet


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class UniquenessVerdict:
    """Outcome of comparing two jets of the same function."""

    passed: bool
    slope_gap: float
    witness_eps: Optional[float] = None
    allowed: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "pass": self.passed,
            "slope_gap": self.slope_gap,
            "witness_eps": self.witness_eps,
            "allowed": self.allowed,
        }


def check_uniqueness(a: Jet1, b: Jet1, eps_sequence: Iterable[float]) -> UniquenessVerdict:
    """
    Check that two jets claimed for the same f have the same slope.

    Both contracts give |sa - sb| <= |Ea(eps)| + |Eb(eps)| for every eps
    on the shared radius; as the bounds shrink the slopes must coincide.
    """
    _check_base(a.x0, b.x0, "check_uniqueness")
    gap = abs(a.slope - b.slope)
    floor = 8.0 * UNIT_ROUNDOFF * max(1.0, abs(a.slope), abs(b.slope))
    r = min(a.radius, b.radius)
    for eps in eps_sequence:
        if eps == 0.0 or abs(eps) > r:
            continue
        allowed = (a.env.bound(eps) + b.env.bound(eps)) * SLACK + floor
        if gap > allowed:
            return UniquenessVerdict(False, gap, float(eps), allowed)
    return UniquenessVerdict(True, gap)


@dataclass(frozen=True)
class ContractReport:
    """Sampled check of a jet contract against its function."""

    passed: bool
    checked: int
    witness_eps: Optional[float] = None
    witness_value: Optional[float] = None
    message: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "witness_eps": self.witness_eps,
            "witness_value": self.witness_value,
            "message": self.message,
        }


def evaluation_noise(
    f: Callable[[float], float], x: float, value: float, noise_factor: float = 64.0
) -> float:
    """
    Absolute noise of the computed f(x).

    Evaluators exposing ``error(x)`` report their own running estimate;
    other callables get noise_factor * u * max(1, |value|).
    """
    error = getattr(f, "error", None)
    if error is not None:
        return float(error(x))
    return noise_factor * UNIT_ROUNDOFF * max(1.0, abs(value))


def roundoff_noise(
    f: Callable[[float], float], x0: float, value: float, noise_factor: float = 64.0
) -> NoiseModel:
    """Absolute evaluation-noise allowance for comparing f(x0+eps) to value."""
    base = evaluation_noise(f, x0, value, noise_factor)

    def noise(eps: float) -> float:
        try:
            fx = f(x0 + eps)
        except (ArithmeticError, ValueError, EpscalcError):
            return base
        own = evaluation_noise(f, x0 + eps, fx, noise_factor)
        scale = abs(fx) + abs(value) + abs(x0) + abs(eps)
        return own + base + noise_factor * UNIT_ROUNDOFF * scale

    return noise


def verify_contract(
    jet: Jet1,
    f: Callable[[float], float],
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    noise: Optional[NoiseModel] = None,
) -> ContractReport:
    """
    Sample |f(x0+eps) - value - slope*eps| <= |eps| * bound(eps) on the grid.

    Args:
        jet: Jet under test
        f: The function the jet claims to approximate
        points: Grid size
        depth: Grid reaches radius * 2**-depth
        noise: Absolute evaluation-noise allowance per point; defaults to a
               roundoff model scaled by the magnitudes involved

    Returns:
        ContractReport; never raises for a failed check
    """
    noise = noise or roundoff_noise(f, jet.x0, jet.value)
    grid = certification_grid(jet.radius, points, depth)
    for eps in grid:
        eps = float(eps)
        try:
            residual = f(jet.x0 + eps) - jet.predict(eps)
        except (ArithmeticError, ValueError, EpscalcError) as e:
            return ContractReport(False, len(grid), eps, None, f"evaluation failed: {e}")
        allowed = abs(eps) * jet.env.bound(eps) * SLACK + noise(eps)
        if not abs(residual) <= allowed:
            return ContractReport(False, len(grid), eps, residual, "contract violated")
    return ContractReport(True, len(grid))


# -- Jet0 -------------------------------------------------------------------------


def jet0_from_jet1(j: Jet1) -> Jet0:
    """Differentiable implies continuous: |f - v| <= (|f'| + sup|E|) |eps|."""
    return Jet0(j.x0, j.value, _analytic(j.deviation_bound(), 1.0, min(j.radius, 1.0)))


def jet0_add(a: Jet0, b: Jet0) -> Jet0:
    _check_base(a.x0, b.x0, "jet0_add")
    return Jet0(a.x0, a.value + b.value, env_sum(a.env, b.env))


def jet0_mul(a: Jet0, b: Jet0) -> Jet0:
    """f*g - va*vb = (f - va)*g + va*(g - vb)."""
    _check_base(a.x0, b.x0, "jet0_mul")
    r = min(a.radius, b.radius, 1.0)
    ea, eb = _restrict(a.env, r), _restrict(b.env, r)
    g_bound = abs(b.value) + eb.sup_bound()
    env = env_sum(env_scale_bounded(ea, g_bound), env_scale_bounded(eb, abs(a.value)))
    return Jet0(a.x0, a.value * b.value, env)


def jet0_recip(a: Jet0) -> Jet0:
    """
    Reciprocal of a continuous function with nonzero value.

    Raises:
        DomainError: If the value is zero
    """
    v = a.value
    if v == 0.0:
        raise DomainError(f"reciprocal of a jet with zero value at x0={a.x0!r}")
    cert = a.env.certified()
    r = _shrink_radius(
        a.radius, lambda rr: cert.coeff * rr**cert.power <= abs(v) / 2.0, "jet0_recip"
    )
    return Jet0(a.x0, 1.0 / v, env_scale_bounded(cert.with_radius(r), 2.0 / (v * v)))


def continuity_jet0(
    f: Callable[[float], float],
    x0: float,
    radius: float,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    fit_points: int = 161,
    inflate: float = 1.1,
    noise: Optional[NoiseModel] = None,
) -> Jet0:
    """
    Fit and certify a continuity envelope for f at x0 from samples.

    The residual f(x0+eps) - f(x0) is fitted on a coarse grid, then the
    fitted envelope is checked on the full certification grid.

    Raises:
        CertificationError: If the residual does not shrink or the fitted
            envelope is violated
    """
    value = f(x0)
    radius = min(radius, 1.0)
    noise = noise or roundoff_noise(f, x0, value)

    def residual(eps: float) -> float:
        return f(x0 + eps) - value

    eps_fit = [float(e) for e in certification_grid(radius, fit_points, depth)]
    res = [residual(e) for e in eps_fit]
    fit = fit_envelope(eps_fit, res, [noise(e) for e in eps_fit], radius, inflate, residual)
    violation = find_violation(fit.envelope, residual, radius, points, depth, noise)
    if violation is not None:
        raise CertificationError("continuity envelope violated", *violation)
    return Jet0(float(x0), value, fit.envelope)


__all__: List[str] = [
    "Jet0",
    "Jet1",
    "UniquenessVerdict",
    "ContractReport",
    "bases_match",
    "jet_const",
    "jet_var",
    "jet_add",
    "jet_sub",
    "jet_neg",
    "jet_scale",
    "jet_mul",
    "jet_recip",
    "jet_div",
    "jet_chain",
    "jet_inverse",
    "jet_monomial",
    "jet_rational_power",
    "check_uniqueness",
    "verify_contract",
    "evaluation_noise",
    "roundoff_noise",
    "jet0_from_jet1",
    "jet0_add",
    "jet0_mul",
    "jet0_recip",
    "continuity_jet0",
]
