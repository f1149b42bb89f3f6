"""
Certified approximation objects.

- envelope: error functions E(eps) with C*|eps|^p certificates
- jet: first-order approximations and the derivative-rule algebra
- riemann: rectangle-sum brackets for monotone integrands
"""

from .envelope import (
    EnvelopeFit,
    EnvelopeKind,
    ErrorEnvelope,
    FunnelBox,
    env_compose,
    env_dominates,
    env_scale_bounded,
    env_sum,
    fit_envelope,
    funnel_boxes,
)
from .jet import Jet0, Jet1

__all__ = [
    "EnvelopeFit",
    "EnvelopeKind",
    "ErrorEnvelope",
    "FunnelBox",
    "Jet0",
    "Jet1",
    "env_compose",
    "env_dominates",
    "env_scale_bounded",
    "env_sum",
    "fit_envelope",
    "funnel_boxes",
]
