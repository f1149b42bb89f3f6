"""
Evaluation of expression trees.

Three views of the same tree:

- ``eval_value``: a plain number, with every transcendental leaf computed
  by the geometric kernels
- ``eval_jet``: a Jet1 built by the derivative rules
- ``eval_tjet``: an order-n TaylorJet (see ``analysis.taylor``)

The value path performs exactly the arithmetic the jet rules perform on
values, so ``eval_value(e, x)`` and ``eval_jet(e, x).value`` are the same
float. ``ExprEvaluator`` adds a running roundoff estimate, which the
certification routines use as their noise floor.
"""

import logging
from fractions import Fraction
from typing import Callable, Optional, Tuple, TypeVar

from ..core.envelope import ErrorEnvelope, NoiseModel, find_violation, fit_envelope
from ..core.jet import (
    Jet1,
    jet_add,
    jet_chain,
    jet_const,
    jet_div,
    jet_monomial,
    jet_mul,
    jet_neg,
    jet_rational_power,
    jet_recip,
    jet_sub,
    jet_var,
)
from ..errors import CertificationError, DomainError, EpscalcError
from ..geometry.functions import DEFAULT_TOL, geo_cos_sin, geo_cosh_sinh, geo_exp, geo_ln
from ..geometry.jets import jet_call
from ..geometry.roots import int_power, nth_root
from ..utils.grids import DEFAULT_DEPTH, DEFAULT_GRID_POINTS, UNIT_ROUNDOFF, certification_grid
from .nodes import Add, Call, Constant, Div, Expr, Mul, Neg, Pow, Sub, Variable, to_source

logger = logging.getLogger(__name__)

NOISE_FACTOR = 64.0

T = TypeVar("T")


def _located(node: Expr, compute: Callable[[], T]) -> T:
    """Run ``compute`` and tag a DomainError with the printed node."""
    try:
        return compute()
    except DomainError as err:
        if err.location is not None:
            raise
        raise DomainError(str(err), to_source(node)) from err


# -- values ----------------------------------------------------------------------


def power_value(base: float, q: Fraction) -> float:
    """base^q computed the way the power jets compute their values."""
    if q == 0:
        return 1.0
    num, den = q.numerator, q.denominator
    if den == 1:
        if num < 0:
            if base == 0.0:
                raise DomainError("zero raised to a negative power")
            return 1.0 / int_power(base, -num)
        return int_power(base, num)
    if base == 0.0 and num > 0:
        return 0.0
    if not base > 0.0:
        raise DomainError(f"rational power needs a positive base, got {base!r}")
    root = nth_root(base, den)
    out = int_power(root, abs(num))
    return 1.0 / out if num < 0 else out


def primitive_value_slope(name: str, x: float, tol: float) -> Tuple[float, float]:
    """(f(x), f'(x)) for a primitive, both from the geometric kernels."""
    if name == "sin":
        c, s = geo_cos_sin(x, tol)
        return s, c
    if name == "cos":
        c, s = geo_cos_sin(x, tol)
        return c, -s
    if name == "sinh":
        c, s = geo_cosh_sinh(x, tol)
        return s, c
    if name == "cosh":
        c, s = geo_cosh_sinh(x, tol)
        return c, s
    if name == "exp":
        e = geo_exp(x, tol)
        return e, e
    if name == "ln":
        if not x > 0.0:
            raise DomainError(f"ln needs a positive argument, got {x!r}")
        return geo_ln(x, tol), 1.0 / x
    if name == "sqrt":
        if x == 0.0:
            return 0.0, float("inf")
        if x < 0.0:
            raise DomainError(f"square root of negative number {x!r}")
        r = nth_root(x, 2)
        return r, 0.5 / r
    if name == "abs":
        return abs(x), (1.0 if x >= 0.0 else -1.0)
    raise DomainError(f"unknown function {name!r}")


def _sqrt_noise(err: float) -> float:
    """Error of sqrt at 0 given an argument error."""
    return nth_root(err, 2) if err > 0.0 else 0.0


def _value_error(e: Expr, x: float, tol: float, k: float) -> Tuple[float, float]:
    """
    Value and a first-order roundoff estimate.

    ``k`` scales the per-operation rounding allowance k*u*|result|.
    """
    u = k * UNIT_ROUNDOFF
    if isinstance(e, Constant):
        return e.value, 0.0
    if isinstance(e, Variable):
        return x, UNIT_ROUNDOFF * abs(x)
    if isinstance(e, Neg):
        v, err = _value_error(e.operand, x, tol, k)
        return -v, err
    if isinstance(e, (Add, Sub)):
        a, ea = _value_error(e.left, x, tol, k)
        b, eb = _value_error(e.right, x, tol, k)
        r = a + b if isinstance(e, Add) else a - b
        return r, ea + eb + u * abs(r)
    if isinstance(e, Mul):
        a, ea = _value_error(e.left, x, tol, k)
        b, eb = _value_error(e.right, x, tol, k)
        r = a * b
        return r, abs(a) * eb + abs(b) * ea + u * abs(r)
    if isinstance(e, Div):
        a, ea = _value_error(e.left, x, tol, k)
        b, eb = _value_error(e.right, x, tol, k)
        if b == 0.0:
            raise DomainError("division by zero", to_source(e))
        r = a * (1.0 / b)
        return r, ea / abs(b) + abs(a) * eb / (b * b) + 2.0 * u * abs(r)
    if isinstance(e, Pow):
        b, eb = _value_error(e.base, x, tol, k)
        r = _located(e, lambda: power_value(b, e.exponent))
        q = abs(float(e.exponent))
        spread = q * abs(r / b) * eb if b != 0.0 else 0.0
        return r, spread + u * abs(r)
    if isinstance(e, Call):
        a, ea = _value_error(e.arg, x, tol, k)
        r, d = _located(e, lambda: primitive_value_slope(e.name, a, tol))
        if d == float("inf"):
            return r, _sqrt_noise(ea)
        return r, abs(d) * ea + u * (abs(r) + abs(a * d))
    raise TypeError(f"not an expression node: {e!r}")


def eval_value(e: Expr, x0: float, tol: float = DEFAULT_TOL) -> float:
    """
    Numeric value of ``e`` at ``x0``.

    Raises:
        DomainError: With the printed subexpression where it arose
    """
    return _value_error(e, float(x0), tol, NOISE_FACTOR)[0]


class ExprEvaluator:
    """
    Callable evaluator with a roundoff estimate.

    Example:
        >>> f = ExprEvaluator(parse("x^2"))
        >>> f(3.0)
        9.0
    """

    def __init__(self, expr: Expr, tol: float = DEFAULT_TOL, noise_factor: float = NOISE_FACTOR):
        self.expr = expr
        self.tol = tol
        self.noise_factor = noise_factor

    def __call__(self, x: float) -> float:
        return _value_error(self.expr, float(x), self.tol, self.noise_factor)[0]

    def value_and_error(self, x: float) -> Tuple[float, float]:
        v, err = _value_error(self.expr, float(x), self.tol, self.noise_factor)
        return v, err + self.noise_factor * UNIT_ROUNDOFF * abs(v)

    def error(self, x: float) -> float:
        """Roundoff estimate at x, or 0 where f cannot be evaluated."""
        try:
            return self.value_and_error(x)[1]
        except (ArithmeticError, ValueError, EpscalcError):
            return 0.0

    def noise_around(self, x0: float) -> NoiseModel:
        """Absolute noise of f(x0 + eps) - f(x0) as a function of eps."""
        base = self.error(x0)
        return lambda eps: self.error(x0 + eps) + base

    def __repr__(self) -> str:
        return f"ExprEvaluator({to_source(self.expr)!r})"


# -- jets ------------------------------------------------------------------------


def _power_jet(inner: Jet1, q: Fraction) -> Jet1:
    if q == 0:
        return jet_const(1.0, inner.x0)
    num, den = q.numerator, q.denominator
    if den == 1:
        jet = jet_chain(jet_monomial(abs(num), inner.value), inner)
        return jet_recip(jet) if num < 0 else jet
    return jet_chain(jet_rational_power(num, den, inner.value), inner)


def eval_jet(e: Expr, x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    """
    Jet1 of ``e`` at ``x0`` by the derivative rules.

    Raises:
        DomainError: Outside the domain of a subexpression, with its location
        CertificationRequiredError: If a working radius collapses
    """
    x0 = float(x0)
    if isinstance(e, Constant):
        return jet_const(e.value, x0)
    if isinstance(e, Variable):
        return jet_var(x0)
    if isinstance(e, Neg):
        return jet_neg(eval_jet(e.operand, x0, tol))
    if isinstance(e, (Add, Sub, Mul, Div)):
        a = eval_jet(e.left, x0, tol)
        b = eval_jet(e.right, x0, tol)
        if isinstance(e, Add):
            return jet_add(a, b)
        if isinstance(e, Sub):
            return jet_sub(a, b)
        if isinstance(e, Mul):
            return jet_mul(a, b)
        return _located(e, lambda: jet_div(a, b))
    if isinstance(e, Pow):
        inner = eval_jet(e.base, x0, tol)
        return _located(e, lambda: _power_jet(inner, e.exponent))
    if isinstance(e, Call):
        inner = eval_jet(e.arg, x0, tol)
        return _located(e, lambda: jet_call(e.name, inner, tol))
    raise TypeError(f"not an expression node: {e!r}")


def eval_tjet(e: Expr, x0: float, n: int, tol: float = DEFAULT_TOL, **kwargs):
    """Order-n TaylorJet of ``e`` at ``x0``; see ``analysis.taylor.tjet_from_expr``."""
    from ..analysis.taylor import tjet_from_expr

    return tjet_from_expr(e, x0, n, tol=tol, **kwargs)


# -- remainders ------------------------------------------------------------------


def remainder_envelope(
    e: Expr,
    x0: float,
    tol: float = DEFAULT_TOL,
    radius: float = 1.0,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    fit_points: int = 161,
    inflate: float = 1.1,
    noise_factor: float = NOISE_FACTOR,
    jet: Optional[Jet1] = None,
) -> ErrorEnvelope:
    """
    The remainder E(eps) = (f(x0+eps) - f(x0) - f'(x0) eps) / |eps| as data.

    Returns an Empirical envelope sampling E. Its dominator is a fitted
    C|eps|^p when that certifies on the grid, otherwise the jet's own
    envelope when that certifies. Without either, the envelope carries no
    dominator and a warning is logged.
    """
    jet = jet or eval_jet(e, x0, tol)
    f = ExprEvaluator(e, tol, noise_factor)
    r = min(radius, jet.radius)
    v, s = jet.value, jet.slope
    base_noise = f.error(x0)

    def sampler(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        return (f(x0 + eps) - v - s * eps) / abs(eps)

    def noise(eps: float) -> float:
        if eps == 0.0:
            return 0.0
        err = f.error(x0 + eps) + base_noise + noise_factor * UNIT_ROUNDOFF * abs(s * eps)
        return err / abs(eps)

    candidates = []
    eps_fit = [float(t) for t in certification_grid(r, fit_points, depth)]
    try:
        residuals = [sampler(t) for t in eps_fit]
        fit = fit_envelope(eps_fit, residuals, [noise(t) for t in eps_fit], r, inflate, sampler)
        candidates.append(fit.envelope)
    except (CertificationError, ArithmeticError, ValueError, EpscalcError) as err:
        logger.debug("remainder fit failed at x0=%g: %s", x0, err)
    candidates.append(jet.env.certified().with_radius(r))

    for candidate in candidates:
        try:
            violation = find_violation(candidate, sampler, r, points, depth, noise)
        except CertificationError as err:
            logger.debug("remainder sampling failed at x0=%g: %s", x0, err)
            continue
        if violation is None:
            return ErrorEnvelope.empirical(sampler, r, candidate)

    logger.warning("no certified dominator for the remainder of %s at %g", to_source(e), x0)
    return ErrorEnvelope.empirical(sampler, r)
