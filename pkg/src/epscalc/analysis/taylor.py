"""
Order-n Taylor jets.

A TaylorJet at x0 holds c_0..c_n with c_k = f^(k)(x0)/k! and a remainder
envelope in the Peano form

    f(x0 + eps) = p(eps) + |eps|^n E(eps),   |E(eps)| <= C |eps|^q

Coefficients come from truncated-series arithmetic on coefficient lists.
Primitive series are seeded by the derivative pairs of the geometric
functions (sin' = cos, cos' = -sin, sinh' = cosh, cosh' = sinh,
exp' = exp) and composed with the inner series by Horner's scheme.

``tjet_from_expr`` certifies the remainder by sampling; the arithmetic
rules (``tjet_add`` ... ``tjet_compose``) combine remainder envelopes
through the envelope algebra.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..core.envelope import (
    EnvelopeFit,
    ErrorEnvelope,
    env_compose,
    env_scale_bounded,
    env_sum,
    find_violation,
    fit_envelope,
)
from ..core.jet import MAX_SHRINKS, bases_match, evaluation_noise
from ..errors import (
    BaseMismatchError,
    CertificationError,
    CertificationRequiredError,
    DomainError,
    EpscalcError,
)
from ..expr.evaluate import ExprEvaluator, power_value, primitive_value_slope
from ..expr.nodes import Add, Call, Constant, Div, Expr, Mul, Neg, Pow, Sub, Variable, to_source
from ..geometry.functions import DEFAULT_TOL, geo_cos_sin, geo_cosh_sinh, geo_exp, geo_ln
from ..geometry.roots import int_power
from ..utils.grids import (
    DEFAULT_DEPTH,
    DEFAULT_GRID_POINTS,
    UNIT_ROUNDOFF,
    certification_grid,
    one_sided_grid,
)

logger = logging.getLogger(__name__)

Series = List[float]

TAYLOR_RADIUS = 0.5
FIT_POINTS = 161
NOISE_FACTOR = 64.0
# Fitted remainder exponents at or below this count as "does not shrink"
MIN_REMAINDER_POWER = 0.25


@dataclass(frozen=True)
class TaylorJet:
    """Truncated Taylor expansion with a Peano remainder certificate."""

    x0: float
    coeffs: Tuple[float, ...]
    env: ErrorEnvelope = field(compare=False)

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise DomainError(f"Taylor order must be at least 1, got {len(self.coeffs) - 1}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def radius(self) -> float:
        return self.env.radius

    @property
    def value(self) -> float:
        return self.coeffs[0]

    def polynomial(self, eps: float) -> float:
        """p(eps) by Horner's scheme."""
        out = 0.0
        for c in reversed(self.coeffs):
            out = out * eps + c
        return out

    def truncate(self, n: int) -> "TaylorJet":
        """
        Lower-order jet. Dropped terms c_k eps^k, k > n, join the remainder.

        Raises:
            DomainError: If n exceeds the current order
        """
        if n == self.order:
            return self
        if not 1 <= n <= self.order:
            raise DomainError(f"cannot truncate order {self.order} to {n}")
        r = min(self.radius, 1.0)
        tail = sum(abs(c) * r ** (k - n - 1) for k, c in enumerate(self.coeffs) if k > n)
        scaled = env_scale_bounded(self.env, r ** (self.order - n))
        env = env_sum(scaled, _analytic(tail, 1.0, r))
        return TaylorJet(self.x0, self.coeffs[: n + 1], env)

    def to_dict(self) -> Dict[str, object]:
        return {
            "x0": self.x0,
            "order": self.order,
            "coeffs": list(self.coeffs),
            "env": self.env.to_dict(),
        }


def _analytic(coeff: float, power: float, radius: float) -> ErrorEnvelope:
    if coeff == 0.0:
        return ErrorEnvelope.zero(radius)
    return ErrorEnvelope.analytic(coeff, power, radius)


# -- series arithmetic ------------------------------------------------------------


def series_const(c: float, n: int) -> Series:
    return [float(c)] + [0.0] * n


def series_add(a: Sequence[float], b: Sequence[float]) -> Series:
    return [x + y for x, y in zip(a, b)]


def series_sub(a: Sequence[float], b: Sequence[float]) -> Series:
    return [x - y for x, y in zip(a, b)]


def series_scale(a: Sequence[float], k: float) -> Series:
    return [k * x for x in a]


def series_mul(a: Sequence[float], b: Sequence[float], n: Optional[int] = None) -> Series:
    """Cauchy product truncated to degree n (default: the shorter length)."""
    if n is None:
        n = min(len(a), len(b)) - 1
    out = []
    for k in range(n + 1):
        total = 0.0
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            total += a[i] * b[k - i]
        out.append(total)
    return out


def series_recip(b: Sequence[float]) -> Series:
    """
    1/b as a truncated series.

    Raises:
        DomainError: If the constant term is zero
    """
    if b[0] == 0.0:
        raise DomainError("division by a series with zero constant term")
    q0 = 1.0 / b[0]
    q = [q0]
    for k in range(1, len(b)):
        total = 0.0
        for j in range(1, k + 1):
            total += b[j] * q[k - j]
        q.append(-q0 * total)
    return q


def series_div(a: Sequence[float], b: Sequence[float]) -> Series:
    return series_mul(a, series_recip(b))


def series_pow_int(a: Sequence[float], m: int) -> Series:
    """a^m for m >= 0 by repeated squaring."""
    if m < 0:
        raise DomainError(f"negative integer power {m}")
    n = len(a) - 1
    result, base = series_const(1.0, n), list(a)
    while m:
        if m & 1:
            result = series_mul(result, base)
        base = series_mul(base, base)
        m >>= 1
    return result


def series_compose(outer: Sequence[float], inner: Sequence[float]) -> Series:
    """
    outer(inner(eps) - inner[0]) by Horner's scheme.

    ``outer`` holds the expansion of F about inner[0].
    """
    delta = [0.0] + list(inner[1:])
    out = series_const(outer[-1], len(inner) - 1)
    for c in reversed(outer[:-1]):
        out = series_mul(out, delta)
        out[0] += c
    return out


def _factorial_series(derivs: Sequence[float]) -> Series:
    out, fact = [], 1.0
    for k, d in enumerate(derivs):
        if k:
            fact *= k
        out.append(d / fact)
    return out


def _binomial(q: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (q - i) / (i + 1)
    return out


def power_series(a: float, q: Fraction, n: int) -> Series:
    """
    Expansion of (a + d)^q about d = 0, a^q * sum binom(q, k) (d/a)^k.

    Raises:
        DomainError: For a <= 0 with a non-integer exponent, or a = 0 with
            negative q
    """
    value = power_value(a, q)
    if q.denominator == 1 and q >= 0:
        m = int(q)
        return [float(_binomial(q, k)) * int_power(a, m - k) if k <= m else 0.0 for k in range(n + 1)]
    if a == 0.0:
        raise DomainError(f"power {q} has no expansion about 0")
    return [value * float(_binomial(q, k)) / int_power(a, k) for k in range(n + 1)]


def primitive_series(name: str, a: float, n: int, tol: float = DEFAULT_TOL) -> Series:
    """
    Taylor coefficients of a primitive about a, up to degree n.

    Raises:
        DomainError: Outside the primitive's domain, or abs at 0
    """
    if name in ("sin", "cos"):
        c, s = geo_cos_sin(a, tol)
        cycle = [s, c, -s, -c] if name == "sin" else [c, -s, -c, s]
        return _factorial_series([cycle[k % 4] for k in range(n + 1)])
    if name in ("sinh", "cosh"):
        c, s = geo_cosh_sinh(a, tol)
        cycle = [s, c] if name == "sinh" else [c, s]
        return _factorial_series([cycle[k % 2] for k in range(n + 1)])
    if name == "exp":
        e = geo_exp(a, tol)
        return _factorial_series([e] * (n + 1))
    if name == "ln":
        if not a > 0.0:
            raise DomainError(f"ln needs a positive argument, got {a!r}")
        out = [geo_ln(a, tol)]
        for k in range(1, n + 1):
            sign = 1.0 if k % 2 else -1.0
            out.append(sign / (k * int_power(a, k)))
        return out
    if name == "sqrt":
        if not a > 0.0:
            raise DomainError(f"sqrt has no expansion at {a!r}")
        return power_series(a, Fraction(1, 2), n)
    if name == "abs":
        if a == 0.0:
            raise DomainError("abs has no expansion at 0")
        value, slope = primitive_value_slope("abs", a, tol)
        return [value, slope] + [0.0] * (n - 1)
    raise DomainError(f"unknown function {name!r}")


def _located(node: Expr, compute: Callable[[], Series]) -> Series:
    try:
        return compute()
    except DomainError as err:
        if err.location is not None:
            raise
        raise DomainError(str(err), to_source(node)) from err


def expr_series(e: Expr, x0: float, n: int, tol: float = DEFAULT_TOL) -> Series:
    """Taylor coefficients of an expression about x0, up to degree n."""
    if isinstance(e, Constant):
        return series_const(e.value, n)
    if isinstance(e, Variable):
        return [float(x0), 1.0] + [0.0] * (n - 1)
    if isinstance(e, Neg):
        return series_scale(expr_series(e.operand, x0, n, tol), -1.0)
    if isinstance(e, (Add, Sub, Mul, Div)):
        a = expr_series(e.left, x0, n, tol)
        b = expr_series(e.right, x0, n, tol)
        if isinstance(e, Add):
            return series_add(a, b)
        if isinstance(e, Sub):
            return series_sub(a, b)
        if isinstance(e, Mul):
            return series_mul(a, b)
        return _located(e, lambda: series_div(a, b))
    if isinstance(e, Pow):
        base = expr_series(e.base, x0, n, tol)
        q = e.exponent
        if q.denominator == 1:
            if q >= 0:
                return series_pow_int(base, int(q))
            return _located(e, lambda: series_recip(series_pow_int(base, -int(q))))
        return _located(e, lambda: series_compose(power_series(base[0], q, n), base))
    if isinstance(e, Call):
        inner = expr_series(e.arg, x0, n, tol)
        outer = _located(e, lambda: primitive_series(e.name, inner[0], n, tol))
        return series_compose(outer, inner)
    raise TypeError(f"not an expression node: {e!r}")


# -- remainder certification --------------------------------------------------------


@dataclass(frozen=True)
class PeanoVerdict:
    """
    Sampled check that (f(x0+eps) - p(eps)) / |eps|^n shrinks to zero.

    Attributes:
        passed: Fitted exponent is positive and the fit dominates every sample
        order: n
        fit: Fitted dominator of the remainder, when the fit succeeded
        witness_eps / witness_value: Offending sample when failed
        message: Reason for a failure
    """

    passed: bool
    order: int
    fit: Optional[EnvelopeFit] = None
    witness_eps: Optional[float] = None
    witness_value: Optional[float] = None
    message: str = ""

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"pass": self.passed, "order": self.order}
        if self.fit is not None:
            out["C"] = self.fit.fitted_coeff
            out["p"] = self.fit.fitted_power
            out["env"] = self.fit.envelope.to_dict()
        if self.witness_eps is not None:
            out["witness_eps"] = self.witness_eps
            out["witness_value"] = self.witness_value
        if self.message:
            out["message"] = self.message
        return out


def _remainder_sampler(
    f: Callable[[float], float], x0: float, coeffs: Sequence[float]
) -> Callable[[float], float]:
    n = len(coeffs) - 1

    def sampler(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        p = 0.0
        for c in reversed(coeffs):
            p = p * eps + c
        return (f(x0 + eps) - p) / abs(eps) ** n

    return sampler


def _remainder_noise(
    f: Callable[[float], float], x0: float, coeffs: Sequence[float], noise_factor: float
) -> Callable[[float], float]:
    n = len(coeffs) - 1

    def noise(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        try:
            fx = f(x0 + eps)
        except (ArithmeticError, ValueError, EpscalcError):
            return 0.0
        poly = sum(abs(c) * abs(eps) ** k for k, c in enumerate(coeffs))
        err = evaluation_noise(f, x0 + eps, fx, noise_factor)
        err += noise_factor * UNIT_ROUNDOFF * (poly + abs(fx))
        return err / abs(eps) ** n

    return noise


def verify_peano(
    tj: TaylorJet,
    f: Callable[[float], float],
    radius: Optional[float] = None,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    fit_points: int = FIT_POINTS,
    inflate: float = 1.1,
    noise_factor: float = NOISE_FACTOR,
) -> PeanoVerdict:
    """
    Check the Peano form of the remainder for ``tj`` against ``f``.

    The remainder quotient is fitted with C|eps|^q on a coarse grid
    (samples within the roundoff floor excluded) and the inflated fit is
    checked on the full grid. Fails when the quotient does not shrink
    (fitted q at or below 0.25) or a sample escapes the fit.
    """
    r = min(tj.radius if radius is None else radius, 1.0)
    sampler = _remainder_sampler(f, tj.x0, tj.coeffs)
    noise = _remainder_noise(f, tj.x0, tj.coeffs, noise_factor)
    eps_fit = [float(t) for t in certification_grid(r, fit_points, depth)]
    try:
        values = [sampler(t) for t in eps_fit]
        fit = fit_envelope(eps_fit, values, [noise(t) for t in eps_fit], r, inflate, sampler)
    except CertificationError as err:
        return PeanoVerdict(False, tj.order, None, err.eps, err.value, str(err))
    except (ArithmeticError, ValueError, EpscalcError) as err:
        return PeanoVerdict(False, tj.order, message=f"evaluation failed: {err}")

    if fit.resolved and fit.fitted_power <= MIN_REMAINDER_POWER:
        idx = min(
            (i for i in range(len(eps_fit)) if eps_fit[i] != 0.0), key=lambda i: abs(eps_fit[i])
        )
        return PeanoVerdict(
            False,
            tj.order,
            fit,
            eps_fit[idx],
            values[idx],
            f"remainder does not shrink (fitted p={fit.fitted_power:.4g})",
        )
    try:
        violation = find_violation(fit.envelope, sampler, r, points, depth, noise)
    except CertificationError as err:
        return PeanoVerdict(False, tj.order, fit, err.eps, err.value, str(err))
    if violation is not None:
        return PeanoVerdict(False, tj.order, fit, violation[0], violation[1], "fit violated")
    return PeanoVerdict(True, tj.order, fit)


def leading_coefficient_estimates(
    tj: TaylorJet, f: Callable[[float], float], depth: int = 20
) -> List[Tuple[float, float]]:
    """
    (eps, (f(x0+eps) - sum_{k<n} c_k eps^k) / eps^n) on eps = r 2^-k.

    The estimates tend to c_n as eps shrinks, the repeated L'Hopital view
    of the top coefficient.
    """
    n = tj.order
    lower = tj.coeffs[:n]
    out = []
    for eps in one_sided_grid(min(tj.radius, 1.0), depth):
        p = 0.0
        for c in reversed(lower):
            p = p * eps + c
        out.append((eps, (f(tj.x0 + eps) - p) / int_power(eps, n)))
    return out


def tjet_from_expr(
    e: Expr,
    x0: float,
    n: int,
    tol: float = DEFAULT_TOL,
    radius: float = TAYLOR_RADIUS,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    fit_points: int = FIT_POINTS,
    inflate: float = 1.1,
    noise_factor: float = NOISE_FACTOR,
) -> TaylorJet:
    """
    Order-n TaylorJet of an expression at x0.

    The remainder envelope is the certified fit from ``verify_peano``.
    When certification fails the envelope is Empirical without a dominator
    and a warning is logged.

    Raises:
        DomainError: If n < 1 or x0 is outside the expression's domain
    """
    if n < 1:
        raise DomainError(f"Taylor order must be at least 1, got {n}")
    x0 = float(x0)
    coeffs = expr_series(e, x0, n, tol)
    f = ExprEvaluator(e, tol, noise_factor)
    probe = TaylorJet(x0, tuple(coeffs), ErrorEnvelope.zero(min(radius, 1.0)))
    verdict = verify_peano(probe, f, radius, points, depth, fit_points, inflate, noise_factor)
    if verdict.passed and verdict.fit is not None:
        env = verdict.fit.envelope
    else:
        logger.warning(
            "remainder of %s at %g (order %d) not certified: %s",
            to_source(e),
            x0,
            n,
            verdict.message,
        )
        env = ErrorEnvelope.empirical(_remainder_sampler(f, x0, coeffs), min(radius, 1.0))
    return TaylorJet(x0, tuple(coeffs), env)


# -- arithmetic --------------------------------------------------------------------


def _align(a: TaylorJet, b: TaylorJet, what: str) -> Tuple[TaylorJet, TaylorJet]:
    if not bases_match(a.x0, b.x0):
        raise BaseMismatchError(f"{what}: base points differ ({a.x0!r} vs {b.x0!r})")
    n = min(a.order, b.order)
    return a.truncate(n), b.truncate(n)


def _poly_sup(coeffs: Sequence[float], r: float, start: int = 0) -> float:
    return sum(abs(c) * r**k for k, c in enumerate(coeffs) if k >= start)


def _high_terms(a: Sequence[float], b: Sequence[float], n: int, r: float) -> float:
    """Bound on the dropped part of a*b over |eps|^n, per unit |eps|."""
    total = 0.0
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j > n:
                total += abs(x * y) * r ** (i + j - n - 1)
    return total


def tjet_add(a: TaylorJet, b: TaylorJet) -> TaylorJet:
    a, b = _align(a, b, "tjet_add")
    return TaylorJet(a.x0, tuple(series_add(a.coeffs, b.coeffs)), env_sum(a.env, b.env))


def tjet_sub(a: TaylorJet, b: TaylorJet) -> TaylorJet:
    a, b = _align(a, b, "tjet_sub")
    return TaylorJet(a.x0, tuple(series_sub(a.coeffs, b.coeffs)), env_sum(a.env, b.env))


def tjet_mul(a: TaylorJet, b: TaylorJet) -> TaylorJet:
    """
    Product. With f = pa + |eps|^n Ea and g = pb + |eps|^n Eb

        (f g - trunc(pa pb)) / |eps|^n = Ea g + Eb pa + high(pa pb) / |eps|^n
    """
    a, b = _align(a, b, "tjet_mul")
    n = a.order
    r = min(a.radius, b.radius, 1.0)
    ea, eb = a.env.certified().with_radius(r), b.env.certified().with_radius(r)
    g_bound = _poly_sup(b.coeffs, r) + r**n * eb.sup_bound()
    env = env_sum(
        env_sum(env_scale_bounded(ea, g_bound), env_scale_bounded(eb, _poly_sup(a.coeffs, r))),
        _analytic(_high_terms(a.coeffs, b.coeffs, n, r), 1.0, r),
    )
    return TaylorJet(a.x0, tuple(series_mul(a.coeffs, b.coeffs)), env)


def tjet_recip(b: TaylorJet) -> TaylorJet:
    """
    Reciprocal. The radius shrinks until |g - b0| <= |b0|/2; then with
    q = trunc(1/pb)

        (1/g - q) / |eps|^n = -(high(q pb) / |eps|^n + q Eb) / g

    Raises:
        DomainError: If the constant term is zero
        CertificationRequiredError: If the radius collapses
    """
    b0 = b.coeffs[0]
    if b0 == 0.0:
        raise DomainError("reciprocal of a Taylor jet with zero value")
    n = b.order
    eb = b.env.certified()
    r = min(b.radius, 1.0)
    for _ in range(MAX_SHRINKS):
        drift = _poly_sup(b.coeffs, r, start=1) + r**n * eb.coeff * r**eb.power
        if drift <= abs(b0) / 2.0:
            break
        r *= 0.5
    else:
        raise CertificationRequiredError("tjet_recip: working radius collapsed")
    eb = eb.with_radius(r)
    q = series_recip(b.coeffs)
    inner = env_sum(
        _analytic(_high_terms(q, b.coeffs, n, r), 1.0, r),
        env_scale_bounded(eb, _poly_sup(q, r)),
    )
    return TaylorJet(b.x0, tuple(q), env_scale_bounded(inner, 2.0 / abs(b0)))


def tjet_div(a: TaylorJet, b: TaylorJet) -> TaylorJet:
    a, b = _align(a, b, "tjet_div")
    return tjet_mul(a, tjet_recip(b))


_ARITH = {"add": tjet_add, "sub": tjet_sub, "mul": tjet_mul, "div": tjet_div}


def tjet_arith(a: TaylorJet, b: TaylorJet, op: str) -> TaylorJet:
    """
    Dispatch ``op`` in {"add", "sub", "mul", "div"}.

    Raises:
        DomainError: For an unknown op
        BaseMismatchError: If the jets sit at different points
    """
    try:
        rule = _ARITH[op]
    except KeyError:
        raise DomainError(f"unknown Taylor operation {op!r}")
    return rule(a, b)


def _full_compose(outer: Sequence[float], inner: Sequence[float]) -> List[float]:
    """Untruncated polynomial outer(inner - inner[0])."""
    delta = [0.0] + list(inner[1:])
    out = [outer[-1]]
    for c in reversed(outer[:-1]):
        out = series_mul(out, delta, len(out) + len(delta) - 2)
        out[0] += c
    return out


def tjet_compose(outer: TaylorJet, inner: TaylorJet) -> TaylorJet:
    """
    Jet of F(g(x)) at x0 from F's jet at g(x0) and g's jet at x0.

    With g(x0+eps) - g(x0) = d(eps), |d| <= K |eps|, the remainder over
    |eps|^n splits into the truncated tail of P(D), the drift of P under
    the inner remainder, and |d|^n E_F(d) / |eps|^n <= K^n E_F(K eps).

    Raises:
        BaseMismatchError: If outer.x0 differs from inner's value
        CertificationRequiredError: If the radius collapses
    """
    if not bases_match(outer.x0, inner.value):
        raise BaseMismatchError(
            f"tjet_compose: outer base {outer.x0!r} differs from inner value {inner.value!r}"
        )
    n = min(outer.order, inner.order)
    outer, inner = outer.truncate(n), inner.truncate(n)
    eo, ei = outer.env.certified(), inner.env.certified()

    def lipschitz(rr: float) -> float:
        return _poly_sup(inner.coeffs, rr, start=1) / rr + rr ** (n - 1) * ei.coeff * rr**ei.power

    r = min(inner.radius, 1.0)
    for _ in range(MAX_SHRINKS):
        if lipschitz(r) * r <= outer.radius:
            break
        r *= 0.5
    else:
        raise CertificationRequiredError("tjet_compose: working radius collapsed")
    k = lipschitz(r)
    ei = ei.with_radius(r)

    full = _full_compose(outer.coeffs, inner.coeffs)
    coeffs = (full + [0.0] * (n + 1))[: n + 1]
    tail = sum(abs(c) * r ** (j - n - 1) for j, c in enumerate(full) if j > n)
    slope_bound = sum(j * abs(c) * (k * r) ** (j - 1) for j, c in enumerate(outer.coeffs) if j)
    moved = env_compose(eo, _analytic(k, 1.0, r)) if k > 0.0 else ErrorEnvelope.zero(r)
    env = env_sum(
        env_sum(_analytic(tail, 1.0, r), env_scale_bounded(ei, slope_bound)),
        env_scale_bounded(moved, k**n),
    )
    return TaylorJet(inner.x0, tuple(coeffs), env)
