"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is ignored except inside a rational literal)::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' natural)?
    base     := variable | parameter | rational | '(' expr ')'
    rational := integer ('/' natural)?

A leading sign on an ``expr`` (e.g. ``-x0^2 + x1^2`` or ``(-t)``) is also
accepted.
"""

from __future__ import annotations

import re
from fractions import Fraction

from pfcert.exact.multipoly import HomogeneityError, MultiPoly
from pfcert.exact.parampoly import ParamRat

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+/\d+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


class ParseError(ValueError):
    """Syntax error at character offset ``pos`` of ``text``."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class UnknownSymbolError(ParseError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while j < n and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", text, j)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text, variables, parameter):
        self.text = text
        self.vars = {v: i for i, v in enumerate(variables)}
        self.nvars = len(variables)
        self.param = parameter
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def const(self, c):
        return MultiPoly(self.nvars, {(0,) * self.nvars: c}, homogeneous=False)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be a natural number", tok)
            base = base ** int(tok[1])
        return base

    def base(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.const(int(val))
        if kind == "rat":
            a, b = val.split("/")
            if int(b) == 0:
                self.fail("zero denominator", tok)
            return self.const(Fraction(int(a), int(b)))
        if kind == "name":
            if val in self.vars:
                e = [0] * self.nvars
                e[self.vars[val]] = 1
                return MultiPoly(self.nvars, {tuple(e): 1}, homogeneous=False)
            if val == self.param:
                return self.const(ParamRat.t())
            raise UnknownSymbolError(f"unknown symbol {val!r}", self.text, tok[2])
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'", close)
            return inner
        self.fail(f"unexpected token {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_expression(text: str, variables, parameter: str = "t") -> MultiPoly:
    """Parse into a (not necessarily homogeneous) MultiPoly over Q(t)."""
    return _Parser(text, list(variables), parameter).parse()


def parse_polynomial(text: str, variables, parameter: str = "t") -> MultiPoly:
    """Parse a homogeneous polynomial; raises HomogeneityError otherwise."""
    p = parse_expression(text, variables, parameter)
    degs = sorted({sum(e) for e in p.terms})
    if len(degs) > 1:
        raise HomogeneityError((degs[0], degs[-1]) if len(degs) > 2 else degs)
    return MultiPoly(p.nvars, p.terms, homogeneous=True, degree=degs[0] if degs else None)
