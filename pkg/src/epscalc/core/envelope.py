#!/usr/bin/env python3
"""
Error envelopes: certified bounds for error functions.

An error function E(eps) is defined for all small eps, vanishes at zero and
can be made as small as desired by shrinking eps. This module represents
such functions by an envelope ``|E(eps)| <= C * |eps|**p`` valid on a
symmetric radius, and implements the closure algebra: sums, products with
bounded functions, composition and domination.

Envelope Kinds:
    Analytic: carries (C, p, r) and optionally the sampler it bounds
    Empirical: carries only a sampler; it enters the algebra through a
               certified Analytic dominator

Certification is a falsification check on a dense deterministic grid, not a
proof. The grid is geometric towards zero where the smallness property
matters most.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    CertificationError,
    CertificationRequiredError,
    DomainError,
    EpscalcError,
)
from ..utils.grids import DEFAULT_DEPTH, DEFAULT_GRID_POINTS, SLACK, certification_grid

logger = logging.getLogger(__name__)

Sampler = Callable[[float], float]
NoiseModel = Callable[[float], float]


class EnvelopeKind(Enum):
    """How an envelope knows its bound."""

    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class ErrorEnvelope:
    """
    Certified bound for an error function E(eps).

    Attributes:
        kind: Analytic (closed-form bound) or Empirical (sampler only)
        radius: Half-width r of the validity domain [-r, r]
        coeff: Bound magnitude C (Analytic)
        power: Decay exponent p > 0 (Analytic)
        sampler: Raw access to E, used for funnel and domination checks
        dominator: Certified Analytic bound of an Empirical envelope
    """

    kind: EnvelopeKind
    radius: float
    coeff: float = 0.0
    power: float = 1.0
    sampler: Optional[Sampler] = field(default=None, compare=False, repr=False)
    dominator: Optional["ErrorEnvelope"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise DomainError(f"envelope radius must be positive, got {self.radius!r}")
        if self.kind is EnvelopeKind.ANALYTIC:
            if not self.coeff >= 0:
                raise DomainError(f"envelope coefficient must be nonnegative, got {self.coeff!r}")
            if not self.power > 0:
                raise DomainError(f"envelope power must be positive, got {self.power!r}")
        elif self.sampler is None:
            raise DomainError("empirical envelope requires a sampler")

    @classmethod
    def analytic(
        cls, coeff: float, power: float, radius: float, sampler: Optional[Sampler] = None
    ) -> "ErrorEnvelope":
        """Construct a C*|eps|^p envelope on radius r."""
        return cls(EnvelopeKind.ANALYTIC, radius, float(coeff), float(power), sampler)

    @classmethod
    def zero(cls, radius: float = 1.0) -> "ErrorEnvelope":
        """The identically-zero error function."""
        return cls(EnvelopeKind.ANALYTIC, radius, 0.0, 1.0, lambda eps: 0.0)

    @classmethod
    def empirical(
        cls, sampler: Sampler, radius: float, dominator: Optional["ErrorEnvelope"] = None
    ) -> "ErrorEnvelope":
        """Wrap a raw sampler, optionally with a certified dominator."""
        return cls(EnvelopeKind.EMPIRICAL, radius, sampler=sampler, dominator=dominator)

    @property
    def is_zero(self) -> bool:
        cert = self.certified_or_none()
        return cert is not None and cert.coeff == 0.0

    def certified_or_none(self) -> Optional["ErrorEnvelope"]:
        if self.kind is EnvelopeKind.ANALYTIC:
            return self
        return self.dominator

    def certified(self) -> "ErrorEnvelope":
        """
        Analytic form usable in the algebra.

        Raises:
            CertificationRequiredError: Empirical envelope without dominator
        """
        cert = self.certified_or_none()
        if cert is None:
            raise CertificationRequiredError(
                "empirical envelope needs a certified analytic dominator"
            )
        return cert

    def bound(self, eps: float) -> float:
        """Value of the certified bound C*|eps|^p at ``eps``."""
        cert = self.certified()
        if eps == 0.0 or cert.coeff == 0.0:
            return 0.0
        return cert.coeff * abs(eps) ** cert.power

    def sup_bound(self) -> float:
        """Largest bound value on the radius, C*r^p."""
        cert = self.certified()
        return cert.coeff * self.radius**cert.power

    def with_radius(self, radius: float) -> "ErrorEnvelope":
        """Same bound restricted to a smaller radius."""
        radius = min(radius, self.radius)
        if self.kind is EnvelopeKind.ANALYTIC:
            return ErrorEnvelope.analytic(self.coeff, self.power, radius, self.sampler)
        dominator = self.dominator.with_radius(radius) if self.dominator else None
        return ErrorEnvelope.empirical(self.sampler, radius, dominator)  # type: ignore[arg-type]

    def to_dict(self) -> Dict[str, object]:
        cert = self.certified_or_none()
        if cert is None:
            return {"kind": self.kind.value, "r": self.radius}
        return {"C": cert.coeff, "p": cert.power, "r": self.radius}


@dataclass(frozen=True)
class FunnelBox:
    """
    One tolerance/width rectangle of a funnel.

    Every sampled E(eps) with eps in [x_lo, x_hi] lies in [y_lo, y_hi].
    """

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self) -> None:
        if not (self.x_lo < 0.0 < self.x_hi and self.y_lo < 0.0 < self.y_hi):
            raise DomainError(f"degenerate funnel box {self}")

    def contains(self, other: "FunnelBox") -> bool:
        return (
            self.x_lo <= other.x_lo
            and other.x_hi <= self.x_hi
            and self.y_lo <= other.y_lo
            and other.y_hi <= self.y_hi
        )

    def to_dict(self) -> Dict[str, float]:
        return {"x_lo": self.x_lo, "x_hi": self.x_hi, "y_lo": self.y_lo, "y_hi": self.y_hi}


def _combine_samplers(
    a: Optional[Sampler], b: Optional[Sampler], op: Callable[[float, float], float]
) -> Optional[Sampler]:
    if a is None or b is None:
        return None
    return lambda eps: op(a(eps), b(eps))


def env_sum(a: ErrorEnvelope, b: ErrorEnvelope) -> ErrorEnvelope:
    """
    Envelope of E_a + E_b (and of E_a - E_b).

    C = Ca + Cb, p = min(pa, pb), r = min(ra, rb, 1). Terms with zero
    coefficient do not lower the exponent. The radius clamp keeps
    |eps|^q <= |eps|^p for q >= p.
    """
    ca, cb = a.certified(), b.certified()
    radius = min(a.radius, b.radius, 1.0)
    live = [e for e in (ca, cb) if e.coeff > 0.0]
    sampler = _combine_samplers(a.sampler, b.sampler, lambda x, y: x + y)
    if not live:
        return ErrorEnvelope.analytic(0.0, 1.0, radius, sampler)
    coeff = sum(e.coeff for e in live)
    power = min(e.power for e in live)
    return ErrorEnvelope.analytic(coeff, power, radius, sampler)


def env_scale_bounded(
    a: ErrorEnvelope, bound: float, factor: Optional[Sampler] = None
) -> ErrorEnvelope:
    """
    Envelope of E_a times a function bounded by ``bound`` on the radius.

    Args:
        a: Envelope being scaled
        bound: Verified sup-bound M >= 0 of the multiplying function
        factor: Optional sampler of the multiplying function

    Raises:
        DomainError: If ``bound`` is negative
    """
    if not bound >= 0.0:
        raise DomainError(f"sup-bound must be nonnegative, got {bound!r}")
    cert = a.certified()
    sampler: Optional[Sampler] = None
    if a.sampler is not None:
        inner = a.sampler
        sampler = (lambda eps: factor(eps) * inner(eps)) if factor else None
    if bound == 0.0 or cert.coeff == 0.0:
        return ErrorEnvelope.analytic(0.0, 1.0, a.radius, sampler)
    return ErrorEnvelope.analytic(cert.coeff * bound, cert.power, a.radius, sampler)


def env_compose(outer: ErrorEnvelope, inner: ErrorEnvelope) -> ErrorEnvelope:
    """
    Envelope of E_outer(E_inner(eps)).

    The inner radius shrinks until Cb * r^pb <= ra so that the inner output
    stays in the outer domain; then C = Ca * Cb^pa and p = pa * pb.

    Raises:
        CertificationRequiredError: Inner envelope has no analytic form or
            its radius cannot be shrunk to a positive value
    """
    ci = inner.certified()
    co = outer.certified()
    radius = min(inner.radius, 1.0)
    sampler = None
    if outer.sampler is not None and inner.sampler is not None:
        o, i = outer.sampler, inner.sampler
        sampler = lambda eps: o(i(eps))  # noqa: E731

    if ci.coeff == 0.0 or co.coeff == 0.0:
        return ErrorEnvelope.analytic(0.0, 1.0, radius, sampler)

    if ci.coeff * radius**ci.power > outer.radius:
        radius = (outer.radius / ci.coeff) ** (1.0 / ci.power)
        logger.debug("compose: inner radius shrunk to %g", radius)
    if not (radius > 0.0 and np.isfinite(radius)):
        raise CertificationRequiredError("inner envelope radius collapsed during composition")

    coeff = co.coeff * ci.coeff**co.power
    return ErrorEnvelope.analytic(coeff, co.power * ci.power, radius, sampler)


def _sample(sampler: Sampler, eps: float) -> float:
    try:
        value = float(sampler(eps))
    except (ArithmeticError, ValueError, EpscalcError) as e:
        raise CertificationError(f"sampler failed ({e})", eps, float("nan"))
    if value != value:
        raise CertificationError("sampler returned NaN", eps, value)
    return value


def find_violation(
    big: ErrorEnvelope,
    sampler: Sampler,
    radius: Optional[float] = None,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    noise: Optional[NoiseModel] = None,
) -> Optional[Tuple[float, float]]:
    """
    First grid point where ``|sampler(eps)|`` exceeds the bound of ``big``.

    The noise allowance applies to eps != 0 only; E(0) must be exactly 0.

    Args:
        big: Envelope whose certified bound is tested
        sampler: Candidate error function
        radius: Shared radius (defaults to the envelope radius)
        points: Grid size
        depth: Grid reaches radius * 2**-depth
        noise: Optional absolute evaluation-noise allowance per nonzero
            grid point

    Returns:
        (eps, value) of the first violation, or None

    Raises:
        CertificationError: If the sampler fails or returns NaN anywhere
    """
    r = big.radius if radius is None else min(radius, big.radius)
    cert = big.certified()
    for eps in certification_grid(r, points, depth):
        eps = float(eps)
        value = _sample(sampler, eps)
        allowed = cert.bound(eps) * SLACK
        if noise is not None and eps != 0.0:
            allowed += noise(eps)
        if abs(value) > allowed:
            return eps, value
    return None


def env_dominates(
    big: ErrorEnvelope,
    small_sampler: Sampler,
    radius: Optional[float] = None,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
    noise: Optional[NoiseModel] = None,
) -> bool:
    """
    True iff ``|small(eps)| <= bound_big(eps)`` on the certification grid.

    A True verdict certifies ``small`` as an error function by domination.
    """
    return find_violation(big, small_sampler, radius, points, depth, noise) is None


def certify(
    envelope: ErrorEnvelope, points: int = DEFAULT_GRID_POINTS, depth: int = DEFAULT_DEPTH
) -> ErrorEnvelope:
    """
    Check an envelope against its own sampler.

    Returns the envelope unchanged when the sampled function (including the
    value at eps = 0, which must be exactly zero) stays under the bound.

    Raises:
        CertificationError: On the first violating grid point
    """
    if envelope.sampler is None:
        return envelope
    violation = find_violation(envelope, envelope.sampler, None, points, depth)
    if violation is not None:
        raise CertificationError("envelope does not dominate its sampler", *violation)
    return envelope


@dataclass(frozen=True)
class EnvelopeFit:
    """
    Dominating envelope fitted to sampled residuals.

    Attributes:
        envelope: Certified candidate with inflated coefficient
        fitted_coeff: Tightest C for the fitted exponent on the samples
        fitted_power: Least-squares slope of log|residual| against log|eps|
        resolved: Number of samples above the noise floor used in the fit
    """

    envelope: ErrorEnvelope
    fitted_coeff: float
    fitted_power: float
    resolved: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "env": self.envelope.to_dict(),
            "fitted_C": self.fitted_coeff,
            "fitted_p": self.fitted_power,
            "resolved": self.resolved,
        }


def fit_envelope(
    eps: Sequence[float],
    residuals: Sequence[float],
    noise: Optional[Sequence[float]] = None,
    radius: Optional[float] = None,
    inflate: float = 1.1,
    sampler: Optional[Sampler] = None,
) -> EnvelopeFit:
    """
    Fit a dominating C*|eps|^p to sampled residuals.

    Samples whose residual does not clear four times the evaluation noise are
    excluded from the fit. The exponent is the least-squares slope on
    log-log axes; the coefficient is the smallest one dominating every
    resolved sample, then inflated.

    Raises:
        CertificationError: If the residual does not shrink (fitted p <= 0)
    """
    e = np.abs(np.asarray(eps, dtype=float))
    res = np.abs(np.asarray(residuals, dtype=float))
    floor = np.zeros_like(res) if noise is None else np.abs(np.asarray(noise, dtype=float))
    r = float(e.max()) if radius is None else radius

    mask = (e > 0.0) & (res > 4.0 * floor) & (res > 0.0)
    count = int(mask.sum())
    if count == 0:
        return EnvelopeFit(ErrorEnvelope.analytic(0.0, 1.0, r, sampler), 0.0, 1.0, 0)

    if count == 1:
        power = 1.0
    else:
        slope, _ = np.polyfit(np.log(e[mask]), np.log(res[mask]), 1)
        power = float(slope)

    if not power > 0.0:
        idx = int(np.argmin(np.where(mask, e, np.inf)))
        raise CertificationError(
            f"residual does not shrink (fitted p={power:.4g})", float(eps[idx]), float(residuals[idx])
        )

    coeff = float(np.max(res[mask] / e[mask] ** power))
    logger.debug("fitted envelope C=%g p=%g from %d samples", coeff, power, count)
    env = ErrorEnvelope.analytic(coeff * inflate, power, r, sampler)
    return EnvelopeFit(env, coeff, power, count)


def funnel_boxes(
    e: ErrorEnvelope,
    n_boxes: int,
    y0: float,
    points: int = DEFAULT_GRID_POINTS,
    depth: int = DEFAULT_DEPTH,
) -> List[FunnelBox]:
    """
    Nested rectangles telescoping inwards around the graph of E.

    Heights halve from ``y0``. For Analytic envelopes the width is
    min(r, (y/C)^(1/p)) and is verified against the sampler when one is
    attached. For Empirical envelopes the width is the largest grid
    magnitude such that every sample at or inside it stays within the
    tolerance.

    Raises:
        DomainError: For a non-positive box count or height, a y0 above
            C·r^p, or widths that stop shrinking
        CertificationError: On the first violating (eps, E(eps))
    """
    if n_boxes < 1:
        raise DomainError(f"n_boxes must be positive, got {n_boxes}")
    if not y0 > 0.0:
        raise DomainError(f"y0 must be positive, got {y0!r}")

    heights = [y0 * 2.0**-k for k in range(n_boxes)]

    if e.kind is EnvelopeKind.ANALYTIC:
        ceiling = e.coeff * e.radius**e.power
        if y0 > ceiling:
            raise DomainError(
                f"y0 {y0!r} exceeds the envelope bound {ceiling!r} at the radius; "
                "widths would not shrink"
            )
        boxes = []
        for y in heights:
            width = min(e.radius, (y / e.coeff) ** (1.0 / e.power))
            if e.sampler is not None:
                for eps in certification_grid(width, points, depth):
                    value = _sample(e.sampler, float(eps))
                    if abs(value) > y * SLACK:
                        raise CertificationError("funnel box violated", float(eps), value)
            boxes.append(FunnelBox(-width, width, -y, y))
        _require_shrinking(boxes)
        return boxes

    worst: Dict[float, float] = {}
    first_value: Dict[float, Tuple[float, float]] = {}
    for eps in certification_grid(e.radius, points, depth):
        eps = float(eps)
        value = _sample(e.sampler, eps)  # type: ignore[arg-type]
        mag = abs(eps)
        if abs(value) >= worst.get(mag, -1.0):
            worst[mag] = abs(value)
            first_value[mag] = (eps, value)
    magnitudes = sorted(worst)

    boxes = []
    for y in heights:
        verified = 0.0
        for mag in magnitudes:
            if worst[mag] > y:
                break
            verified = mag
        if verified == 0.0:
            bad = next(m for m in magnitudes if worst[m] > y)
            raise CertificationError("no verified funnel width", *first_value[bad])
        logger.debug("funnel height %g verified width %g", y, verified)
        boxes.append(FunnelBox(-verified, verified, -y, y))
    _require_shrinking(boxes)
    return boxes


def _require_shrinking(boxes: List[FunnelBox]) -> None:
    """Each box must be strictly narrower than the one before it."""
    for k, (outer, inner) in enumerate(zip(boxes, boxes[1:]), start=1):
        if not inner.x_hi < outer.x_hi:
            raise DomainError(
                f"funnel box {k} has width {inner.x_hi!r}, not below {outer.x_hi!r}; "
                "lower y0 or refine the grid"
            )
