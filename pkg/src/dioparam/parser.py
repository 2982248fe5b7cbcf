"""Parser for polynomial expressions in the CLI grammar.

Grammar, loosest to tightest binding::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := INT | NAME | '(' expr ')'

Multiplication is always written with ``*``. Division is only allowed by a
nonzero constant, so rational coefficients read as ``1/2*X^2``. Exponents
must lower to non-negative integer constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .poly import MultiPoly


class ParseError(ValueError):
    code = "syntax-error"

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)
        self.pos = pos


class UnknownVariable(ParseError):
    code = "unknown-variable"


class NegativeExponent(ParseError):
    code = "negative-exponent"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Neg, BinOp]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("num", num, start))
        elif name is not None:
            toks.append(("name", name, start))
        elif sym in "+-*/^()":
            toks.append(("op", sym, start))
        else:
            raise ParseError(f"unexpected character {sym!r}", start)
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        return tok

    def parse(self):
        e = self.expr(0)
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                raise ParseError("implicit multiplication is not allowed; use '*'", tok[2])
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self, min_prec):
        left = self.unary()
        while True:
            kind, op, pos = self.peek()
            if kind != "op" or op not in ("+", "-", "*", "/") or _PREC[op] < min_prec:
                return left
            self.take()
            right = self.expr(_PREC[op] + 1)
            left = BinOp(op, left, right)

    def unary(self):
        kind, op, pos = self.peek()
        if kind == "op" and op == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, op, pos = self.peek()
        if kind == "op" and op == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(int(val))
        if kind == "name":
            return Var(val)
        if kind == "op" and val == "(":
            e = self.expr(0)
            self.expect("op", ")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _UNARY_PREC
    return 5


def to_text(e: Expr) -> str:
    """Print with the minimum parentheses that parse back to the same tree."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        return "-" + (f"({inner})" if _prec(e.operand) < _UNARY_PREC else inner)
    p = _PREC[e.op]
    left, right = to_text(e.left), to_text(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _UNARY_PREC:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def lower(e: Expr, vars: Sequence[str]) -> MultiPoly:
    vars = tuple(vars)
    if isinstance(e, Num):
        return MultiPoly.const(e.value, vars)
    if isinstance(e, Var):
        if e.name not in vars:
            raise UnknownVariable(f"unknown variable {e.name!r} (expected one of {', '.join(vars)})")
        return MultiPoly.var(e.name, vars)
    if isinstance(e, Neg):
        return -lower(e.operand, vars)
    left = lower(e.left, vars)
    if e.op == "+":
        return left + lower(e.right, vars)
    if e.op == "-":
        return left - lower(e.right, vars)
    if e.op == "*":
        return left * lower(e.right, vars)
    right = lower(e.right, vars)
    if not right.is_constant():
        what = "division" if e.op == "/" else "exponent"
        raise ParseError(f"{what} must be a constant, got {right}")
    c = right.constant_value()
    if e.op == "/":
        if c == 0:
            raise ParseError("division by zero")
        return left / c
    if Fraction(c).denominator != 1:
        raise ParseError(f"exponent must be an integer, got {c}")
    if c < 0:
        raise NegativeExponent(f"negative exponent {c}")
    return left ** int(c)


def parse_poly(text: str, expected_vars: Sequence[str]) -> MultiPoly:
    return lower(parse_expr(text), expected_vars)
