"""
Expression language: tree, parser, printer and evaluators.

Example:
    >>> from epscalc.expr import parse, eval_jet
    >>> jet = eval_jet(parse("x^2"), 3.0)
    >>> jet.value, jet.slope
    (9.0, 6.0)
"""

from .evaluate import ExprEvaluator, eval_jet, eval_tjet, eval_value, remainder_envelope
from .nodes import (
    FUNCTIONS,
    Add,
    Call,
    Constant,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Sub,
    Variable,
    to_source,
    walk,
)
from .parser import parse

__all__ = [
    "FUNCTIONS",
    "Add",
    "Call",
    "Constant",
    "Div",
    "Expr",
    "ExprEvaluator",
    "Mul",
    "Neg",
    "Pow",
    "Sub",
    "Variable",
    "eval_jet",
    "eval_tjet",
    "eval_value",
    "parse",
    "remainder_envelope",
    "to_source",
    "walk",
]
