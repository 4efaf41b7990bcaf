"""Recursive-descent parser for polynomial text.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

``/`` only accepts a nonzero constant divisor, which covers rational
literals such as ``3/2`` and F_p(t) coefficients such as ``(t+1)/(t^2+1)``.
Juxtaposition (``2x``) is rejected.  Error offsets are byte offsets into the
UTF-8 encoding of the input.
"""
from __future__ import annotations

import re

from .errors import ExponentOutOfRange, MalformedExpression, UnknownVariable

MAX_EXPONENT = 10_000

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            if m.group(3).isspace():
                pos = m.end()
                continue
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring, field=None):
        self.text = text
        self.ring = ring
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0

    def offset(self, tok):
        return len(self.text[: tok[2]].encode("utf-8"))

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None, cls=MalformedExpression):
        tok = tok or self.peek()
        raise cls(message, field=self.field, offset=self.offset(tok))

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "ident") or tok[1] == "(":
                self.fail(f"implicit multiplication is not allowed before {tok[1]!r}")
            self.fail(f"unexpected {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            rhs_tok = self.peek()
            rhs = self.unary()
            if op_tok[1] == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    self.fail("division requires a nonzero constant divisor", rhs_tok)
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    self.fail("divisor is not invertible in the coefficient domain", rhs_tok)
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "-":
                self.fail("exponents must be non-negative integers", tok, ExponentOutOfRange)
            if tok[0] != "int":
                self.fail("expected an integer exponent after '^'", tok)
            self.take()
            k = int(tok[1])
            if k > MAX_EXPONENT:
                self.fail(f"exponent {k} exceeds {MAX_EXPONENT}", tok, ExponentOutOfRange)
            base = base**k
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                self.fail("chained '^' is ambiguous; add parentheses", nxt)
        return base

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        ring = self.ring
        if kind == "int":
            return ring.const(int(val))
        if kind == "ident":
            if val in ring._index:
                return ring.var(val)
            if val in ring.domain.parameter_names:
                return ring.const(ring.domain.parameter(val))
            self.fail(f"unknown variable {val!r}", tok, UnknownVariable)
        if kind == "op" and val == "(":
            value = self.expr()
            close = self.peek()
            if not (close[0] == "op" and close[1] == ")"):
                self.fail("expected ')'", close)
            self.take()
            return value
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def parse_poly(text, ring, field=None):
    """Parse ``text`` into an exact polynomial of ``ring``.

    ``field`` names the job-file field for error messages.
    """
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text, ring, field).parse()
