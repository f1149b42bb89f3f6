"""
Expression tree for the single-variable language.

Nodes are frozen dataclasses, so trees compare structurally and can be
shared. ``to_source`` prints a tree back to text that parses to the same
tree; it inserts only the parentheses that precedence requires.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator

FUNCTIONS: FrozenSet[str] = frozenset({"sin", "cos", "sinh", "cosh", "exp", "ln", "sqrt", "abs"})
VARIABLE = "x"


class Expr:
    """Base class of all expression nodes."""

    def children(self) -> Iterator["Expr"]:
        return iter(())

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Constant(Expr):
    value: float


@dataclass(frozen=True)
class Variable(Expr):
    name: str = VARIABLE


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def children(self) -> Iterator[Expr]:
        yield self.operand


@dataclass(frozen=True)
class _Binary(Expr):
    left: Expr
    right: Expr

    def children(self) -> Iterator[Expr]:
        yield self.left
        yield self.right


@dataclass(frozen=True)
class Add(_Binary):
    pass


@dataclass(frozen=True)
class Sub(_Binary):
    pass


@dataclass(frozen=True)
class Mul(_Binary):
    pass


@dataclass(frozen=True)
class Div(_Binary):
    pass


@dataclass(frozen=True)
class Pow(Expr):
    """base ^ exponent with an exact rational exponent."""

    base: Expr
    exponent: Fraction

    def children(self) -> Iterator[Expr]:
        yield self.base


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr

    def __post_init__(self) -> None:
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")

    def children(self) -> Iterator[Expr]:
        yield self.arg


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield e
    for child in e.children():
        yield from walk(child)


# -- printing ------------------------------------------------------------------

_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_UNARY = 3
_PREC_POWER = 4
_PREC_ATOM = 5


def _precedence(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_SUM
    if isinstance(e, (Mul, Div)):
        return _PREC_PRODUCT
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, Pow):
        return _PREC_POWER
    if isinstance(e, Constant) and e.value < 0:
        return _PREC_SUM
    return _PREC_ATOM


def _wrap(e: Expr, needs_parens: bool) -> str:
    text = to_source(e)
    return f"({text})" if needs_parens else text


def _number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _exponent(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})" if q.denominator != 1 else f"({q.numerator})"


def to_source(e: Expr) -> str:
    """Print an expression in the input grammar."""
    if isinstance(e, Constant):
        return _number(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _precedence(e.operand) < _PREC_UNARY)
    if isinstance(e, Pow):
        return _wrap(e.base, _precedence(e.base) <= _PREC_POWER) + "^" + _exponent(e.exponent)
    if isinstance(e, Call):
        return f"{e.name}({to_source(e.arg)})"
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        left = _wrap(e.left, _precedence(e.left) < _PREC_SUM)
        return left + op + _wrap(e.right, _precedence(e.right) <= _PREC_SUM)
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left = _wrap(e.left, _precedence(e.left) < _PREC_PRODUCT)
        return left + op + _wrap(e.right, _precedence(e.right) <= _PREC_PRODUCT)
    raise TypeError(f"not an expression node: {e!r}")
