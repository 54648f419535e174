"""Recursive-descent parser for the ASCII formula syntax.

Grammar, loosest binding first::

    iff     := implies ('<->' iff)?
    implies := or ('->' implies)?
    or      := and ('or' and)*
    and     := unary ('and' unary)*
    unary   := 'not' unary | quant | atom | '(' iff ')'
    quant   := ('forall' | 'exists') VAR '.' iff
    atom    := VAR ('in' | '=') VAR

A quantifier body extends as far to the right as possible.
"""

from __future__ import annotations

import re

from .formula import (
    And,
    Equal,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    is_var_name,
)

_TOKEN_RE = re.compile(r"\s*(<->|->|[().=]|[a-z][a-z0-9]*)")


class ParseError(ValueError):
    """Raised with the character offset where parsing failed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i][0]
        return None

    def position(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i][1]
        return len(self.text)

    def advance(self):
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}")
        self.advance()

    def fail(self, message):
        found = self.peek()
        what = "end of input" if found is None else repr(found)
        raise ParseError(f"{message}, found {what}", self.position())

    def var(self):
        tok = self.peek()
        if tok is None or not is_var_name(tok):
            self.fail("expected a variable")
        return self.advance()

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            self.fail("unexpected token")
        return f

    def iff(self):
        left = self.implies()
        if self.peek() == "<->":
            self.advance()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "or":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "and":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "not":
            self.advance()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.advance()
            v = self.var()
            self.expect(".")
            body = self.iff()
            return Forall(v, body) if tok == "forall" else Exists(v, body)
        if tok == "(":
            self.advance()
            f = self.iff()
            self.expect(")")
            return f
        lhs = self.var()
        op = self.peek()
        if op == "in":
            self.advance()
            return Member(lhs, self.var())
        if op == "=":
            self.advance()
            return Equal(lhs, self.var())
        self.fail("expected 'in' or '='")


def parse(text: str) -> Formula:
    return _Parser(text).parse()
