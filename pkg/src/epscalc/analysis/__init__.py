"""
Theorems of the calculus as numerical procedures.

- meanvalue: critical-point, mean-value and Cauchy witnesses; L'Hopital
- taylor: order-n Taylor jets and the Peano remainder check
- integral: bracketed integration and the FTC jet
"""

from .integral import IntegralBracket, ftc_jet, integrate, verify_ftc
from .meanvalue import (
    LimitVerdict,
    Witness,
    cmvt_witness,
    find_critical,
    lhopital_00,
    lhopital_general,
    mvt_witness,
)
from .taylor import (
    PeanoVerdict,
    TaylorJet,
    tjet_add,
    tjet_arith,
    tjet_compose,
    tjet_div,
    tjet_from_expr,
    tjet_mul,
    tjet_sub,
    verify_peano,
)

__all__ = [
    "IntegralBracket",
    "LimitVerdict",
    "PeanoVerdict",
    "TaylorJet",
    "Witness",
    "cmvt_witness",
    "find_critical",
    "ftc_jet",
    "integrate",
    "lhopital_00",
    "lhopital_general",
    "mvt_witness",
    "tjet_add",
    "tjet_arith",
    "tjet_compose",
    "tjet_div",
    "tjet_from_expr",
    "tjet_mul",
    "tjet_sub",
    "verify_ftc",
    "verify_peano",
]
