"""Text grammar for polynomials, rational functions and derivations.

::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := INTEGER | 'x' INDEX | 'd' INDEX | '(' expr ')'

``xN`` is the N-th variable and ``dN`` the coordinate derivation
``d/dxN``.  Whitespace is ignored.  The number of variables is the largest
index used unless given explicitly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .derivation import Derivation
from .poly import Poly
from .ratfunc import RatFunc


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([xd])(\d+)|([-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at {pos}")
        num, kind, idx, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif kind is not None:
            i = int(idx)
            if i < 1:
                raise ParseError(f"index must be positive in {kind}{idx}")
            tokens.append((kind, i))
        else:
            tokens.append((op, op))
        pos = m.end()
    return tokens


def max_index(text: str) -> int:
    """Largest variable / derivation index mentioned in ``text`` (0 if none)."""
    return max((v for part in text.split(";") for k, v in _tokenize(part) if k in ("x", "d")),
               default=0)


class _Parser:
    def __init__(self, tokens, nvars: int):
        self.tokens = tokens
        self.pos = 0
        self.n = nvars

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        if self.peek() != kind:
            raise ParseError(f"expected {kind!r}, found {self.peek()!r}")
        return self.take()

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression")
        v = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input at token {self.tokens[self.pos][1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            w = self.term()
            v = _combine(v, w, op)
        return v

    def term(self):
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            w = self.unary()
            v = _combine(v, w, op)
        return v

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.unary()
            if not isinstance(e, RatFunc) or not e.is_constant() or e.constant_value().denominator != 1:
                raise ParseError("exponent must be an integer constant")
            if isinstance(base, Derivation):
                raise ParseError("cannot raise a derivation to a power")
            try:
                return base ** int(e.constant_value())
            except ZeroDivisionError as exc:
                raise ParseError(str(exc)) from exc
        return base

    def atom(self):
        kind = self.peek()
        if kind is None:
            raise ParseError("unexpected end of input")
        if kind == "num":
            return RatFunc.const(self.n, self.take()[1])
        if kind == "x":
            return RatFunc.var(self.n, self.take()[1])
        if kind == "d":
            i = self.take()[1]
            return Derivation.coordinate(self.n, i)
        if kind == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {self.tokens[self.pos][1]!r}")


def _combine(v, w, op):
    vd, wd = isinstance(v, Derivation), isinstance(w, Derivation)
    try:
        if op in "+-":
            if vd != wd:
                # a literal 0 may be added to a derivation
                if vd and not w:
                    return v
                if wd and not v:
                    return w if op == "+" else -w
                raise ParseError("cannot add a derivation and a function")
            return v + w if op == "+" else v - w
        if op == "*":
            if vd and wd:
                raise ParseError("cannot multiply two derivations")
            return w * v if vd else v * w
        if wd:
            raise ParseError("cannot divide by a derivation")
        return v / w
    except ZeroDivisionError as exc:
        raise ParseError(str(exc)) from exc


def _nvars_for(text: str, nvars: Optional[int]) -> int:
    used = max_index(text)
    if nvars is None:
        return max(used, 1)
    if used > nvars:
        raise ParseError(f"index {used} exceeds the declared {nvars} variables")
    return nvars


def parse_ratfunc(text: str, nvars: Optional[int] = None) -> RatFunc:
    """Parse a rational function such as ``"(x2 + x3)/(x2*x3)"``."""
    v = _Parser(_tokenize(text), _nvars_for(text, nvars)).parse()
    if isinstance(v, Derivation):
        raise ParseError("expected a function, found a derivation")
    return v


def parse_poly(text: str, nvars: Optional[int] = None) -> Poly:
    f = parse_ratfunc(text, nvars)
    if not f.is_poly():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.num


def parse_derivation(text: str, nvars: Optional[int] = None) -> Derivation:
    """Parse ``"x3*d1 + d2"``; a bare ``0`` is the zero derivation."""
    n = _nvars_for(text, nvars)
    v = _Parser(_tokenize(text), n).parse()
    if isinstance(v, RatFunc):
        if v:
            raise ParseError("expected a derivation, found a function")
        return Derivation.zero(n)
    return v


def parse_derivations(text: str, nvars: Optional[int] = None) -> list[Derivation]:
    """Semicolon-separated derivations sharing one variable count."""
    n = _nvars_for(text, nvars)
    parts = [p for p in text.split(";") if p.strip()]
    return [parse_derivation(p, n) for p in parts]


def parse_scalar(text: str) -> Fraction:
    return Fraction(text)
