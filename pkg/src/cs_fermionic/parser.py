"""Literal parser for the printed forms of XPoly, PPoly and PDiffOp.

Grammar::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := NUMBER | 'b' | 'N' | p<k> | d<k> | x<k> | '(' expr ')'

Products are read left to right, so ``d1*p1`` is the composition
``p1*d1 + 1``. The target type is chosen from the symbols present: any
``x<k>`` gives an XPoly, any ``d<k>`` a PDiffOp, anything else a PPoly.
An XPoly spans the highest index used unless a variable count is passed.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Union

from .algebra import BETA, BetaScalar, PPoly, XPoly
from .errors import ParseError
from .logging_config import get_logger
from .pdiff import PDiffOp

logger = get_logger(__name__)

Parsed = Union[XPoly, PPoly, PDiffOp]

_TOKEN = re.compile(
    r"(?:(?P<number>\d+(?:/\d+)?)|(?P<symbol>[pdx]\d+|[bN])|(?P<op>[-+*^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"Unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup or ""
        start = match.start(kind)
        value = match.group(kind)
        if kind == "number" and "/" in value and int(value.split("/")[1]) == 0:
            raise ParseError("Zero denominator", start)
        tokens.append(Token(kind, value, start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Domain:
    """Constructors for the target type."""

    def __init__(
        self, const: Callable[[BetaScalar], Any], symbol: Callable[[Token], Any]
    ):
        self.const = const
        self.symbol = symbol


def _choose_domain(tokens: list[Token], nvars: Optional[int] = None) -> _Domain:
    symbols = [t for t in tokens if t.kind == "symbol"]
    xs = [t for t in symbols if t.text[0] == "x"]
    pds = [t for t in symbols if t.text[0] in "pd"]
    if xs and pds:
        raise ParseError("Cannot mix x variables with p or d symbols", pds[0].position)

    if xs:
        top = max(xs, key=lambda t: int(t.text[1:]))
        if nvars is None:
            nvars = int(top.text[1:])
        elif int(top.text[1:]) > nvars:
            raise ParseError(
                f"Literal uses {top.text} but only {nvars} variables exist",
                top.position,
            )
        count = nvars

        def x_symbol(token: Token) -> XPoly:
            index = int(token.text[1:])
            if index < 1:
                raise ParseError("Variable indices start at x1", token.position)
            return XPoly.var(index, count)

        return _Domain(lambda c: XPoly.const(c, count), x_symbol)

    if any(t.text[0] == "d" for t in pds):

        def op_symbol(token: Token) -> PDiffOp:
            index = int(token.text[1:])
            if token.text[0] == "p":
                return PDiffOp.p(index)
            if index < 1:
                raise ParseError("There is no derivative in p0", token.position)
            return PDiffOp.d(index)

        return _Domain(PDiffOp.scalar, op_symbol)

    return _Domain(PPoly.const, lambda token: PPoly.p(int(token.text[1:])))


class _Parser:
    def __init__(self, tokens: list[Token], domain: _Domain):
        self.tokens = tokens
        self.index = 0
        self.domain = domain

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> None:
        if self.current.text != text:
            raise ParseError(f"Expected {text!r}", self.current.position)
        self.advance()

    def expr(self) -> Any:
        sign = 1
        if self.current.text in ("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Any:
        value = self.factor()
        while self.current.text == "*":
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> Any:
        value = self.atom()
        if self.current.text == "^":
            self.advance()
            token = self.current
            if token.kind != "number" or "/" in token.text:
                raise ParseError(
                    "Exponent must be a non-negative integer", token.position
                )
            self.advance()
            value = value ** int(token.text)
        return value

    def atom(self) -> Any:
        token = self.current
        if token.kind == "number":
            self.advance()
            return self.domain.const(BetaScalar.const(Fraction(token.text)))
        if token.kind == "symbol":
            self.advance()
            if token.text == "b":
                return self.domain.const(BETA)
            if token.text == "N":
                return self.domain.const(BetaScalar.formal_n())
            return self.domain.symbol(token)
        if token.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if token.kind == "end":
            raise ParseError("Unexpected end of input", token.position)
        raise ParseError(f"Unexpected token {token.text!r}", token.position)


def parse_poly(text: str, nvars: Optional[int] = None) -> Parsed:
    """Parse a polynomial or operator literal.

    Args:
        text: Literal in the printer's syntax
        nvars: Variable count of an x-literal; the highest index used by default

    Returns:
        XPoly, PDiffOp or PPoly depending on the symbols used

    Raises:
        ParseError: With the offending character position
    """
    tokens = tokenize(text)
    if len(tokens) == 1:
        raise ParseError("Empty literal", 0)
    parser = _Parser(tokens, _choose_domain(tokens, nvars))
    value = parser.expr()
    if parser.current.kind != "end":
        current = parser.current
        raise ParseError(f"Unexpected token {current.text!r}", current.position)
    logger.debug(
        "Parsed literal",
        extra={"extra_fields": {"type": type(value).__name__, "terms": len(value)}},
    )
    return value


def parse_ppoly(text: str) -> PPoly:
    """parse_poly restricted to p-polynomials."""
    value = parse_poly(text)
    if not isinstance(value, PPoly):
        raise ParseError(f"Expected a polynomial in p, got {type(value).__name__}", 0)
    return value


def parse_pdiffop(text: str) -> PDiffOp:
    """parse_poly read as an operator; literals without d's are multiplications."""
    value = parse_poly(text)
    if isinstance(value, PPoly):
        return PDiffOp.multiplication(value)
    if not isinstance(value, PDiffOp):
        kind = type(value).__name__
        raise ParseError(f"Expected an operator in p and d, got {kind}", 0)
    return value


def parse_xpoly(text: str, nvars: int) -> XPoly:
    """parse_poly restricted to x-polynomials in ``nvars`` variables."""
    value = parse_poly(text, nvars)
    if isinstance(value, PPoly) and all(mono == () for mono in value.monomials()):
        return XPoly.const(value.coefficient(()), nvars)
    if not isinstance(value, XPoly):
        raise ParseError(f"Expected a polynomial in x, got {type(value).__name__}", 0)
    return value
