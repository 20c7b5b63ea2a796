"""Tiny symbolic expression language for user-supplied surface profiles.

Grammar (whitespace-insensitive):

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' integer)?
    atom   := number | 'pi' | 't' | fn '(' expr ')' | '(' expr ')'
    fn     := 'sin' | 'cos' | 'exp'

Sums and products of polynomials and sin/cos/exp terms cover all built-in
surfaces; derivatives are formed symbolically so second derivatives of the
profile are exact.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import ConfigError
from .surface import SurfaceProfile, from_callables


class _Node:
    def __call__(self, t):
        raise NotImplementedError

    def diff(self):
        raise NotImplementedError


class _Const(_Node):
    def __init__(self, v):
        self.v = float(v)

    def __call__(self, t):
        return self.v * np.ones_like(np.asarray(t, dtype=float))

    def diff(self):
        return _Const(0.0)

    def __repr__(self):
        return f"{self.v:g}"


class _Var(_Node):
    def __call__(self, t):
        return np.asarray(t, dtype=float)

    def diff(self):
        return _Const(1.0)

    def __repr__(self):
        return "t"


class _Add(_Node):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def __call__(self, t):
        return self.a(t) + self.b(t)

    def diff(self):
        return _Add(self.a.diff(), self.b.diff())

    def __repr__(self):
        return f"({self.a}+{self.b})"


class _Mul(_Node):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def __call__(self, t):
        return self.a(t) * self.b(t)

    def diff(self):
        return _Add(_Mul(self.a.diff(), self.b), _Mul(self.a, self.b.diff()))

    def __repr__(self):
        return f"({self.a}*{self.b})"


class _Pow(_Node):
    def __init__(self, base, n):
        self.base, self.n = base, int(n)

    def __call__(self, t):
        return self.base(t) ** self.n

    def diff(self):
        if self.n == 0:
            return _Const(0.0)
        return _Mul(_Mul(_Const(self.n), _Pow(self.base, self.n - 1)),
                    self.base.diff())

    def __repr__(self):
        return f"({self.base}^{self.n})"


class _Fn(_Node):
    _eval = {"sin": np.sin, "cos": np.cos, "exp": np.exp}

    def __init__(self, name, arg):
        self.name, self.arg = name, arg

    def __call__(self, t):
        return self._eval[self.name](self.arg(t))

    def diff(self):
        d = self.arg.diff()
        if self.name == "sin":
            outer = _Fn("cos", self.arg)
        elif self.name == "cos":
            outer = _Mul(_Const(-1.0), _Fn("sin", self.arg))
        else:
            outer = self
        return _Mul(outer, d)

    def __repr__(self):
        return f"{self.name}({self.arg})"


_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|([A-Za-z_]+)|(\*\*|[-+*^()]))")


def _tokenize(text):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"surface expression: cannot tokenize at {text[pos:]!r}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", float(text[m.start():m.end()].strip())))
        elif ident is not None:
            tokens.append(("ident", ident))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        k, v = self.toks[self.i]
        if (kind and k != kind) or (value is not None and v != value):
            raise ConfigError(f"surface expression: unexpected token {v!r}")
        self.i += 1
        return v

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            op = self.take("op")
            rhs = self.term()
            node = _Add(node, rhs if op == "+" else _Mul(_Const(-1.0), rhs))
        return node

    def term(self):
        node = self.unary()
        while self.peek() == ("op", "*"):
            self.take("op", "*")
            node = _Mul(node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take("op", "-")
            return _Mul(_Const(-1.0), self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == ("op", "^"):
            self.take("op", "^")
            k, v = self.peek()
            if k != "num" or v != int(v) or v < 0:
                raise ConfigError("surface expression: exponent must be a nonnegative integer")
            self.take("num")
            node = _Pow(node, int(v))
        return node

    def atom(self):
        k, v = self.peek()
        if k == "num":
            self.take("num")
            return _Const(v)
        if k == "ident":
            self.take("ident")
            if v == "pi":
                return _Const(math.pi)
            if v in ("t", "s", "x"):
                return _Var()
            if v in ("sin", "cos", "exp"):
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return _Fn(v, arg)
            raise ConfigError(f"surface expression: unknown identifier {v!r}")
        if (k, v) == ("op", "("):
            self.take("op", "(")
            node = self.expr()
            self.take("op", ")")
            return node
        raise ConfigError(f"surface expression: unexpected {v!r}")


def parse_expression(text: str) -> _Node:
    p = _Parser(_tokenize(text))
    node = p.expr()
    p.take("end")
    return node


def surface_from_expression(text: str, name: str = "inline") -> SurfaceProfile:
    """Surface profile from an expression in t, with symbolic derivatives."""
    f = parse_expression(text)
    df = f.diff()
    d2f = df.diff()
    try:
        return from_callables(f, df, d2f, name=name)
    except Exception as exc:
        raise ConfigError(f"surface expression {text!r} invalid: {exc}") from exc
