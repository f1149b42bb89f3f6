"""
Recursive-descent parser for the expression language.

Grammar:
    expr     := term (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := "-" factor | power
    power    := atom ("^" exponent)?
    atom     := NUMBER | "x" | NAME "(" expr ")" | "(" expr ")"
    exponent := "-" exponent | ( "(" exponent ")" | NUMBER ("/" NUMBER)? ) ("^" exponent)?

Exponents are exact rationals, so "x^1/2" is x to the one half and
"x^2^3" is x^8. Unary minus binds looser than "^": "-x^2" is -(x^2).
Errors report the byte offset of the offending token and the set of
tokens that would have been accepted there.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Set

from ..errors import ParseError
from .nodes import FUNCTIONS, VARIABLE, Add, Call, Constant, Div, Expr, Mul, Neg, Pow, Sub, Variable

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)

NUMBER = "NUMBER"
NAME = "NAME"
END = "end of input"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(src: str) -> List[Token]:
    """
    Split ``src`` into tokens with byte offsets.

    Raises:
        ParseError: On a character outside the language
    """
    tokens: List[Token] = []
    pos = 0
    byte = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", byte, {NUMBER, NAME, "("})
        text = m.group()
        kind = m.lastgroup
        if kind == "number":
            tokens.append(Token(NUMBER, text, byte))
        elif kind == "name":
            tokens.append(Token(NAME, text, byte))
        elif kind == "op":
            tokens.append(Token(text, text, byte))
        pos = m.end()
        byte += len(text.encode("utf-8"))
    tokens.append(Token(END, "", byte))
    return tokens


class Parser:
    """One-shot parser over a token list."""

    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0
        self.expected: Set[str] = set()

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        self.expected = set()
        return tok

    def _check(self, kind: str) -> bool:
        self.expected.add(kind)
        return self.current.kind == kind

    def _accept(self, kind: str) -> bool:
        if self._check(kind):
            self._advance()
            return True
        return False

    def _fail(self, message: str) -> ParseError:
        tok = self.current
        found = tok.text or END
        return ParseError(f"{message}, found {found!r}", tok.offset, self.expected)

    def _expect(self, kind: str) -> Token:
        if self._check(kind):
            return self._advance()
        raise self._fail(f"expected {kind!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if not self._check(END):
            raise self._fail("unexpected token")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self._accept("+"):
                e = Add(e, self.term())
            elif self._accept("-"):
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            if self._accept("*"):
                e = Mul(e, self.factor())
            elif self._accept("/"):
                e = Div(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        if self._accept("-"):
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._accept("^"):
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> Fraction:
        if self._accept("-"):
            return -self.exponent()
        if self._accept("("):
            q = self.exponent()
            self._expect(")")
        elif self._check(NUMBER):
            q = Fraction(self._advance().text)
            # p/q only when q is a literal; otherwise "/" belongs to the term
            if self._check("/") and self._peek().kind == NUMBER:
                self._advance()
                tok = self.current
                den = Fraction(self._expect(NUMBER).text)
                if den == 0:
                    raise ParseError("zero denominator in exponent", tok.offset, {NUMBER})
                q = q / den
        else:
            raise self._fail("expected a rational exponent")
        if self._check("^"):
            tok = self._advance()
            outer = self.exponent()
            if outer.denominator != 1:
                raise ParseError("exponent of an exponent must be an integer", tok.offset, {NUMBER})
            if q == 0 and outer < 0:
                raise ParseError("zero raised to a negative exponent", tok.offset, {NUMBER})
            q = q ** int(outer)
        return q

    def atom(self) -> Expr:
        if self._check(NUMBER):
            return Constant(float(self._advance().text))
        if self._check(NAME):
            tok = self.current
            if tok.text == VARIABLE:
                self._advance()
                return Variable()
            if tok.text in FUNCTIONS:
                self._advance()
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(tok.text, arg)
            raise ParseError(
                f"unknown name {tok.text!r}", tok.offset, {VARIABLE} | set(FUNCTIONS)
            )
        if self._accept("("):
            e = self.expr()
            self._expect(")")
            return e
        self._check("-")
        self._check("(")
        raise self._fail("expected a number, x, a function call or '('")


def parse(src: str) -> Expr:
    """
    Parse expression text into a tree.

    Raises:
        ParseError: With byte offset and expected-token set

    Example:
        >>> parse("x^2")
        Pow(base=Variable(name='x'), exponent=Fraction(2, 1))
    """
    return Parser(src).parse()
