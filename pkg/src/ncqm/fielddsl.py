"""Recursive-descent parser for gauge-field components and scalar text.

Grammar, one component per line::

    expr    := ["-"|"+"] term (("+"|"-") term)*
    term    := power (("*" | "/") power)*
    power   := atom ["^" ["-"] int]
    atom    := number | symbol | "i" | coord | "(" expr ")"

Coordinates are ``x, y, z``.  A coordinate may never end up in a divisor or
under a negative exponent, so every component is a polynomial in the
coordinates with :class:`~ncqm.scalars.Scalar` coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .scalars import I, ONE, SYMBOLS, Scalar, ScalarError, const, sym
from .weyl import COORDS, GaugeFieldSpec, WeylExpr, mul

__all__ = [
    "DSLError",
    "ParseError",
    "UnknownSymbol",
    "NonPolynomialCoordinateUse",
    "parse_expr",
    "parse_field",
    "parse_scalar",
]


class DSLError(ValueError):
    """Base class; carries the 1-based ``line`` and ``col`` of the offending token."""

    def __init__(self, msg, line=1, col=1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line, self.col = line, col


class ParseError(DSLError):
    pass


class UnknownSymbol(DSLError):
    pass


class NonPolynomialCoordinateUse(DSLError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_DIM = 3


@dataclass(frozen=True)
class _Tok:
    kind: str   # "num", "name", "op", "end"
    text: str
    col: int


def _tokenize(text, line):
    toks, pos = [], 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:      # only trailing whitespace left
            break
        num, name, op = mt.groups()
        col = mt.start(mt.lastindex) + 1
        if num is not None:
            toks.append(_Tok("num", num, col))
        elif name is not None:
            toks.append(_Tok("name", name, col))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", line, col)
            toks.append(_Tok("op", op, col))
        pos = mt.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, line, allow_coords):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line
        self.allow_coords = allow_coords

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, cls, msg, tok):
        return cls(msg, self.line, tok.col)

    def expect(self, text):
        t = self.take()
        if t.text != text:
            raise self.error(ParseError, f"expected {text!r}, got {t.text or 'end of input'!r}", t)

    def parse(self):
        if self.peek().kind == "end":
            raise self.error(ParseError, "empty expression", self.peek())
        out = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise self.error(ParseError, f"unexpected {t.text!r}", t)
        return out

    def expr(self):
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        out = self.term().scale(const(sign))
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.power()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.take()
            start = self.peek()
            rhs = self.power()
            if op.text == "*":
                out = mul(out, rhs)
            else:
                out = out.scale(self._invert(rhs, start))
        return out

    def _invert(self, w, tok):
        if not w.is_scalar():
            raise self.error(NonPolynomialCoordinateUse, "coordinate in a divisor", tok)
        s = w.constant()
        if s.is_zero():
            raise self.error(ParseError, "division by zero", tok)
        try:
            return ONE / s
        except ScalarError:
            raise self.error(ParseError, f"divisor {s} is not a single term", tok) from None

    def power(self):
        start = self.peek()
        base = self.atom()
        if not (self.peek().kind == "op" and self.peek().text == "^"):
            return base
        self.take()
        neg = self.peek().kind == "op" and self.peek().text == "-"
        if neg:
            self.take()
        t = self.take()
        if t.kind != "num" or not t.text.isdigit():
            raise self.error(ParseError, "exponent must be an integer", t)
        k = int(t.text)
        if neg:
            base = WeylExpr.scalar(_DIM, self._invert(base, start))
        out = WeylExpr.scalar(_DIM, ONE)
        for _ in range(k):
            out = mul(out, base)
        return out

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return WeylExpr.scalar(_DIM, const(Fraction(t.text)))
        if t.kind == "name":
            if t.text in COORDS:
                if not self.allow_coords:
                    raise self.error(NonPolynomialCoordinateUse,
                                     f"coordinate {t.text} in a scalar", t)
                return WeylExpr.coord(_DIM, COORDS.index(t.text))
            if t.text == "i":
                return WeylExpr.scalar(_DIM, I)
            if t.text not in SYMBOLS:
                raise self.error(UnknownSymbol, f"unknown symbol {t.text!r}", t)
            return WeylExpr.scalar(_DIM, sym(t.text))
        if t.kind == "op" and t.text == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise self.error(ParseError, f"unexpected {t.text or 'end of input'!r}", t)


def _restrict(w: WeylExpr, dim: int, line: int) -> WeylExpr:
    terms = {}
    for (rp, dp), coeff in w.terms:
        if any(rp[dim:]):
            bad = COORDS[next(a for a in range(dim, _DIM) if rp[a])]
            raise ParseError(f"coordinate {bad} outside {dim} dimensions", line, 1)
        terms[(rp[:dim], dp[:dim])] = coeff
    return WeylExpr(dim, terms)


def parse_expr(text: str, dim: int = 2, line: int = 1) -> WeylExpr:
    """Parse one coordinate polynomial into a ``dim``-dimensional WeylExpr."""
    return _restrict(_Parser(text, line, True).parse(), dim, line)


def parse_scalar(text: str) -> Scalar:
    """Parse scalar text, including the canonical ``str(Scalar)`` rendering.

    >>> str(parse_scalar("1 - 2*kappa"))
    '1 - 2*kappa'
    """
    return _Parser(text, 1, False).parse().constant()


def parse_field(source, dim: int | None = None) -> GaugeFieldSpec:
    """Gauge field from one component per line (or a sequence of strings).

    >>> f = parse_field(["-(B/2)*y", "(B/2)*x"])
    >>> str(f.constant_field_strength()[0][1])
    'B'
    """
    lines = source.splitlines() if isinstance(source, str) else list(source)
    numbered = [(n, s) for n, s in enumerate(lines, 1) if s.strip()]
    if not numbered:
        raise ParseError("no field components", 1, 1)
    dim = len(numbered) if dim is None else dim
    if len(numbered) != dim:
        raise ParseError(f"{len(numbered)} components for {dim} dimensions", numbered[-1][0], 1)
    return GaugeFieldSpec([parse_expr(s, dim, n) for n, s in numbered])
