"""
Jets of the primitive functions.

Envelopes come from the derivative-at-zero inequality chains combined with
the summation rules, e.g. for sin at x0 with s = sin x0, c = cos x0:

    sin(x0 + e) - s - c e = s (cos e - 1) + c (sin e - e)

and |cos e - 1| <= e^2/2, |sin e - e| <= |e| (1 - cos e) <= |e|^3/2, so
|E(e)| <= (|s|/2 + |c| r/2) |e| on radius r. The hyperbolic bounds carry an
extra cosh^2(r/2) factor, and exp uses e^e - 1 <= 2e for e <= 1/2.
"""

import logging
from functools import lru_cache
from typing import Callable, Dict

from ..core.envelope import ErrorEnvelope
from ..core.jet import (
    Jet1,
    bases_match,
    jet_chain,
    jet_inverse,
    jet_rational_power,
)
from ..errors import BaseMismatchError, DomainError
from .functions import DEFAULT_TOL, geo_cos_sin, geo_cosh_sinh, geo_exp, geo_ln

logger = logging.getLogger(__name__)

TRIG_RADIUS = 1.0
EXP_RADIUS = 0.5


def _env(coeff: float, radius: float) -> ErrorEnvelope:
    if coeff == 0.0:
        return ErrorEnvelope.zero(radius)
    return ErrorEnvelope.analytic(coeff, 1.0, radius)


@lru_cache(maxsize=None)
def _cosh_sq_half(radius: float) -> float:
    c, _ = geo_cosh_sinh(0.5 * radius)
    return c * c


def jet_sin(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    c, s = geo_cos_sin(x0, tol)
    r = TRIG_RADIUS
    return Jet1(float(x0), s, c, _env(0.5 * abs(s) + 0.5 * abs(c) * r, r))


def jet_cos(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    c, s = geo_cos_sin(x0, tol)
    r = TRIG_RADIUS
    return Jet1(float(x0), c, -s, _env(0.5 * abs(c) + 0.5 * abs(s) * r, r))


def jet_sinh(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    c, s = geo_cosh_sinh(x0, tol)
    r = TRIG_RADIUS
    coeff = (0.5 * abs(s) + 0.5 * c * r) * _cosh_sq_half(r)
    return Jet1(float(x0), s, c, _env(coeff, r))


def jet_cosh(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    c, s = geo_cosh_sinh(x0, tol)
    r = TRIG_RADIUS
    coeff = (0.5 * c + 0.5 * abs(s) * r) * _cosh_sq_half(r)
    return Jet1(float(x0), c, s, _env(coeff, r))


def jet_exp(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    """exp(x0 + e) - E - E e = E (e^e - 1 - e), bounded by 2 E e^2 for |e| <= 1/2."""
    e = geo_exp(x0, tol)
    return Jet1(float(x0), e, e, _env(2.0 * e, EXP_RADIUS))


def jet_ln(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    """
    ln as the inverse of exp: invert the exp jet at ln(x0).

    Raises:
        DomainError: If x0 <= 0
    """
    if not x0 > 0.0:
        raise DomainError(f"ln needs a positive argument, got {x0!r}")
    inv = jet_inverse(jet_exp(geo_ln(x0, tol), tol))
    if not bases_match(inv.x0, x0):
        raise BaseMismatchError(f"exp(ln({x0!r})) = {inv.x0!r} drifted")
    return Jet1(float(x0), inv.value, inv.slope, inv.env)


def jet_sqrt(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    return jet_rational_power(1, 2, x0)


def jet_abs(x0: float, tol: float = DEFAULT_TOL) -> Jet1:
    """
    |x| is linear on each side of 0, so the envelope is zero.

    Raises:
        DomainError: At x0 = 0, where no slope exists
    """
    if x0 == 0.0:
        raise DomainError("abs has no derivative at 0")
    sign = 1.0 if x0 > 0.0 else -1.0
    return Jet1(float(x0), abs(x0), sign, ErrorEnvelope.zero(min(abs(x0), 1.0)))


PRIMITIVE_JETS: Dict[str, Callable[..., Jet1]] = {
    "sin": jet_sin,
    "cos": jet_cos,
    "sinh": jet_sinh,
    "cosh": jet_cosh,
    "exp": jet_exp,
    "ln": jet_ln,
    "sqrt": jet_sqrt,
    "abs": jet_abs,
}


def jet_call(name: str, inner: Jet1, tol: float = DEFAULT_TOL) -> Jet1:
    """Jet of name(g(x)) from the jet of g, by the chain rule."""
    try:
        builder = PRIMITIVE_JETS[name]
    except KeyError:
        raise DomainError(f"unknown function {name!r}")
    return jet_chain(builder(inner.value, tol), inner)
