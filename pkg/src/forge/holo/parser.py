"""Infix parser for expression text.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' integer)?
    atom   := number ['i'] | 'i' | 'z' | 'pi' | func '(' args ')' | '(' expr ')'
    func   := 'exp' | 'log' | 'pow'        # pow(expr, real)

``^`` only takes an integer exponent (optionally signed or parenthesized);
real exponents go through ``pow``.
"""

from __future__ import annotations

import math
import re

from ..errors import ParseError
from .expr import Expr, Z, add, const, div, exp, ipow, log, mul, neg, rpow, sub

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


def _tokenize(text, line, col0):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _Parser:
    def __init__(self, text, line=None, col=1):
        self.toks = _tokenize(text, line, col)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise self.error(f"expected {value!r}, found {t[1] or 'end of input'!r}", t)
        return t

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self):
        t = self.peek()
        if t[1] == "-":
            self.take()
            return neg(self.unary())
        if t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            n = self._integer()
            return ipow(base, n)
        return base

    def _integer(self):
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        t = self.take()
        if t[0] != "num" or not re.fullmatch(r"\d+", t[1]):
            raise self.error("'^' needs an integer exponent; use pow(e, mu) for real powers", t)
        if paren:
            self.expect(")")
        return sign * int(t[1])

    def _real(self):
        sign = 1.0
        while self.peek()[1] in ("-", "+"):
            if self.take()[1] == "-":
                sign = -sign
        t = self.take()
        if t[0] != "num":
            raise self.error("expected a real exponent", t)
        return sign * float(t[1])

    def atom(self):
        t = self.take()
        kind, val, col = t
        if kind == "num":
            nxt = self.peek()
            if nxt[0] == "name" and nxt[1] == "i" and nxt[2] == col + len(val):
                self.take()
                return const(1j * float(val))
            return const(float(val))
        if kind == "name":
            if val == "z":
                return Z
            if val == "i":
                return const(1j)
            if val == "pi":
                return const(math.pi)
            if val in ("exp", "log"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return exp(arg) if val == "exp" else log(arg)
            if val == "pow":
                self.expect("(")
                arg = self.expr()
                self.expect(",")
                mu = self._real()
                self.expect(")")
                return rpow(arg, mu)
            raise self.error(f"unknown name {val!r}", t)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(f"unexpected {val or 'end of input'!r}", t)


def parse(text: str, line: int | None = None, col: int = 1) -> Expr:
    """Parse expression text; errors carry ``line``/``col`` (1-based)."""
    return _Parser(text, line, col).parse()
