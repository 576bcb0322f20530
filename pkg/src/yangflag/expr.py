"""A small expression language over Y_n[[u^-1]].

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | INT | '(' expr ')' | 'inv' '(' expr ')' | minor | qp
    minor   := 't' '[' ints ';' ints ']' arg
    qp      := 'p' '[' INT ',' INT ';' ints? ']' arg
    arg     := '(' 'u' (('+' | '-') INT)? ')'
    ints    := INT (',' INT)*

Parsing yields a small AST; ``evaluate`` turns it into a Series truncated
at order N.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .minor_calculus import quasi_plucker_minor, ydet
from .series_ring import NonUnitConstantTerm, Series, invert, shift

__all__ = ["ExpressionError", "parse_expression", "evaluate", "evaluate_text"]

_TOKEN = re.compile(r"\s*(?:(\d+)|(inv|u|t|p)|([-+*()\[\];,]))")


class ExpressionError(ValueError):
    def __init__(self, message, pos, expected=()):
        self.pos = pos
        self.expected = tuple(expected)
        detail = f" (expected {' or '.join(expected)})" if expected else ""
        super().__init__(f"at column {pos + 1}: {message}{detail}")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Minor:
    I: tuple
    J: tuple
    shift: int
    pos: int


@dataclass(frozen=True)
class Plucker:
    i: int
    j: int
    M: tuple
    shift: int
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Inv:
    arg: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, *expected):
        tok, pos = self.toks[self.i]
        if expected and tok not in expected and not ("INT" in expected and tok.isdigit()):
            shown = "end of input" if tok == "<end>" else repr(tok)
            raise ExpressionError(f"unexpected {shown}", pos, [repr(e) if e != "INT" else "an integer" for e in expected])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        self.take("<end>")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() == "*":
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        tok, pos = self.peek(), self.pos()
        if tok == "-":
            self.take()
            return Neg(self.factor())
        if tok.isdigit():
            return Num(int(self.take()))
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok == "inv":
            self.take()
            self.take("(")
            node = self.expr()
            self.take(")")
            return Inv(node, pos)
        if tok == "t":
            self.take()
            self.take("[")
            I = self.ints()
            self.take(";")
            J = self.ints()
            self.take("]")
            if len(I) != len(J):
                raise ExpressionError(f"size mismatch: |I| = {len(I)} but |J| = {len(J)}", pos)
            return Minor(I, J, self.arg(), pos)
        if tok == "p":
            self.take()
            self.take("[")
            i = int(self.take("INT"))
            self.take(",")
            j = int(self.take("INT"))
            self.take(";")
            M = self.ints() if self.peek().isdigit() else ()
            self.take("]")
            return Plucker(i, j, M, self.arg(), pos)
        self.take("-", "INT", "(", "inv", "t", "p")

    def ints(self):
        out = [int(self.take("INT"))]
        while self.peek() == ",":
            self.take()
            out.append(int(self.take("INT")))
        return tuple(out)

    def arg(self):
        self.take("(")
        self.take("u")
        a = 0
        if self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            a = sign * int(self.take("INT"))
        self.take(")")
        return a


def parse_expression(text: str):
    """Parse ``text`` into an AST; raises ExpressionError with a column on bad input."""
    return _Parser(text).parse()


def _check_indices(n, pos, *groups):
    for g in groups:
        for x in g:
            if not 1 <= x <= n:
                raise ExpressionError(f"index {x} out of range 1..{n}", pos)


def evaluate(node, n: int, N: int):
    """Series (or integer) value of an AST over Y_n, truncated at order N."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Minor):
        _check_indices(n, node.pos, node.I, node.J)
        return ydet(n, node.I, node.J, N, node.shift, raw=True)
    if isinstance(node, Plucker):
        _check_indices(n, node.pos, (node.i, node.j), node.M)
        if node.i in node.M:
            raise ExpressionError(f"p needs i outside M, got i={node.i}", node.pos)
        try:
            s = quasi_plucker_minor(node.i, node.j, node.M, n, N)
        except NonUnitConstantTerm as exc:
            raise ExpressionError(str(exc), node.pos) from exc
        return shift(s, node.shift) if node.shift else s
    if isinstance(node, Neg):
        return -evaluate(node.arg, n, N)
    if isinstance(node, Inv):
        x = evaluate(node.arg, n, N)
        if not isinstance(x, Series):
            if x == 0:
                raise ExpressionError("inverse of zero", node.pos)
            return 1 / Fraction(x)
        try:
            return invert(x)
        except NonUnitConstantTerm as exc:
            raise ExpressionError(f"inv: {exc}", node.pos) from exc
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, n, N), evaluate(node.right, n, N)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        return a * b
    raise TypeError(f"unknown node {node!r}")


def evaluate_text(text: str, n: int, N: int):
    return evaluate(parse_expression(text), n, N)
