"""Parsing and printing of scalar expressions in s, q = s^2 and named parameters.

Grammar: integers, names, + - * / ^ and parentheses; exponents are integers
(possibly negative).  Used by all structured-text inputs (presentations,
R-matrices, characters, calculi).
"""

from __future__ import annotations

import re

from .scalars import ONE, Q, QScalar, S

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[-+*/^()])")


class ScalarParseError(ValueError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScalarParseError(f"bad token at {text[pos:]!r}")
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, env):
        self.toks = tokens
        self.i = 0
        self.env = env

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()
            rhs = self.factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def factor(self):
        if self.peek() == "-":
            self.next()
            return -self.factor()
        if self.peek() == "+":
            self.next()
            return self.factor()
        val = self.atom()
        if self.peek() == "^":
            self.next()
            val = val ** self.int_exponent()
        return val

    def int_exponent(self):
        sign = 1
        while self.peek() in ("-", "+"):
            if self.next() == "-":
                sign = -sign
        tok = self.next()
        if tok == "(":
            k = self.int_exponent()
            if self.next() != ")":
                raise ScalarParseError("unclosed exponent parenthesis")
            return sign * k
        if tok is None or not tok.isdigit():
            raise ScalarParseError("integer exponent expected")
        return sign * int(tok)

    def atom(self):
        tok = self.next()
        if tok == "(":
            val = self.expr()
            if self.next() != ")":
                raise ScalarParseError("unbalanced parenthesis")
            return val
        if tok is None:
            raise ScalarParseError("unexpected end of expression")
        if tok.isdigit():
            return QScalar.from_int(int(tok))
        if tok in self.env:
            return self.env[tok]
        raise ScalarParseError(f"unknown symbol {tok!r}")


def base_env(params=None):
    env = {"s": S, "q": Q}
    if params:
        env.update(params)
    return env


def parse_scalar(text, env=None):
    """Parse a scalar expression; env maps names to QScalar values."""
    if env is None:
        env = base_env()
    toks = _tokenize(str(text))
    if not toks:
        raise ScalarParseError("empty expression")
    p = _Parser(toks, env)
    val = p.expr()
    if p.peek() is not None:
        raise ScalarParseError(f"trailing input {p.toks[p.i:]!r}")
    if not isinstance(val, QScalar):
        val = ONE * val
    return val


def scalar_to_str(x):
    """Canonical, re-parseable rendering of a QScalar."""
    return repr(x)
