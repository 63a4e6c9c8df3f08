"""A small expression language for exact coefficients.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' INT)?
    atom  := INT | NAME | '(' expr ')'

Names are resolved through an environment; the operators are whatever the
resolved values implement, so the same parser serves scalars, algebra
elements and Lie algebra elements.
"""

from __future__ import annotations

import re
from typing import Callable, Mapping

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


class ExprError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), col))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^()":
                raise ExprError(f"unexpected character {ch!r}", col)
            tokens.append(("op", ch, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, env: Mapping, scalar: Callable[[int], object]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.env = env
        self.scalar = scalar

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}", col)

    def parse(self):
        if self.peek()[0] == "end":
            raise ExprError("empty expression", 1)
        value = self.expr()
        kind, _, col = self.peek()
        if kind != "end":
            raise ExprError("trailing input", col)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, col = self.take()
            rhs = self.term()
            value = self._apply(op, value, rhs, col)
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, col = self.take()
            rhs = self.unary()
            value = self._apply(op, value, rhs, col)
        return value

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            _, _, col = self.take()
            value = self.unary()
            try:
                return -value
            except (TypeError, ValueError) as exc:
                raise ExprError(str(exc), col) from None
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            _, _, col = self.take()
            kind, val, ecol = self.take()
            if kind != "int":
                raise ExprError("exponent must be a non-negative integer", ecol)
            try:
                return base**val
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ExprError(str(exc), col) from None
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return self.scalar(val)
        if kind == "name":
            if val not in self.env:
                raise ExprError(f"undeclared name {val!r}", col)
            return self.env[val]
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ExprError("unexpected end of input" if kind == "end" else f"unexpected {val!r}", col)

    @staticmethod
    def _apply(op, a, b, col):
        try:
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return a / b
        except ZeroDivisionError:
            raise ExprError("division by zero", col) from None
        except (TypeError, ValueError) as exc:
            raise ExprError(str(exc) or f"cannot apply {op!r}", col) from None


def evaluate(text: str, env: Mapping, scalar: Callable[[int], object]):
    result = _Parser(text, env, scalar).parse()
    return result


def evaluate_scalar(text: str, field):
    env = {"t": field.t} if hasattr(field, "t") else {}
    return evaluate(text, env, field)
